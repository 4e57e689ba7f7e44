#pragma once

#include "offshell/real.hpp"

#include "doctest.h"

#include <random>
#include <string>

namespace support {

using offshell::Real;

inline Real R(const char* text) { return offshell::parse_real(text); }

/// |got - want| / max(|want|, floor)
inline Real rel(const Real& got, const Real& want, const Real& floor = Real(1)) {
    return abs(got - want) / std::max(abs(want), floor);
}

/// Oracle literals carry 60 significant digits.
inline Real oracle_tol() { return offshell::parse_real("1e-50"); }

inline std::string str(const Real& x) { return offshell::to_decimal(x, 20); }

/// Uniform draws converted exactly from doubles.
class Draw {
public:
    explicit Draw(unsigned seed) : gen_(seed) {}
    Real operator()(double lo, double hi) {
        return Real(std::uniform_real_distribution<double>(lo, hi)(gen_));
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace support

#define CHECK_REL(got, want, tol)                                                      \
    do {                                                                               \
        const auto _e = support::rel((got), (want));                                   \
        INFO("got " << support::str(got) << " want " << support::str(want)             \
                    << " rel err " << offshell::to_decimal(_e, 3));                     \
        CHECK(_e <= (tol));                                                            \
    } while (0)
