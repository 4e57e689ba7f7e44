#include "offshell/real.hpp"

#include "offshell/errors.hpp"

#include <mpfr.h>

#include <cmath>
#include <cstdio>
#include <vector>

namespace offshell {

namespace {

unsigned digits10_for_bits(int bits) {
    // Boost stores the default as decimal digits; pick the smallest count
    // whose binary conversion covers the requested mantissa.
    return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

}  // namespace

int current_precision_bits() {
    Real probe;
    return static_cast<int>(mpfr_get_prec(probe.backend().data()));
}

namespace {
int g_requested_bits = kDefaultPrecisionBits;
}

int requested_precision_bits() { return g_requested_bits; }

PrecisionScope::PrecisionScope(int bits)
    : previous_digits10_(Real::default_precision()),
      previous_requested_(g_requested_bits),
      bits_(bits) {
    if (bits < kMinPrecisionBits) {
        throw ConfigError("precision_bits must be >= 53, got " + std::to_string(bits));
    }
    Real::default_precision(digits10_for_bits(bits));
    g_requested_bits = bits;
}

PrecisionScope::~PrecisionScope() {
    Real::default_precision(previous_digits10_);
    g_requested_bits = previous_requested_;
}

Real at_working_precision(const Real& x) {
    Real r;
    mpfr_set(r.backend().data(), x.backend().data(), MPFR_RNDN);
    return r;
}

Real pow2(int exponent) {
    Real r(1);
    mpfr_mul_2si(r.backend().data(), r.backend().data(), exponent, MPFR_RNDN);
    return r;
}

std::string to_decimal(const Real& x, int significant_digits) {
    if (significant_digits < 1) significant_digits = 1;
    if (!is_finite(x)) {
        if (boost::multiprecision::isnan(x)) return "nan";
        return x < 0 ? "-inf" : "inf";
    }
    const int n = mpfr_snprintf(nullptr, 0, "%.*RNe", significant_digits - 1,
                                x.backend().data());
    std::vector<char> buf(static_cast<std::size_t>(n) + 1);
    mpfr_snprintf(buf.data(), buf.size(), "%.*RNe", significant_digits - 1,
                  x.backend().data());
    return std::string(buf.data(), static_cast<std::size_t>(n));
}

Real parse_real(const std::string& text) {
    Real r;
    char* end = nullptr;
    const int rc = mpfr_strtofr(r.backend().data(), text.c_str(), &end, 10, MPFR_RNDN);
    (void)rc;
    if (end == text.c_str() || *end != '\0' || !is_finite(r)) {
        throw ConfigError("not a finite real number: '" + text + "'");
    }
    return r;
}

}  // namespace offshell
