#pragma once

// Configurable-precision real type used throughout the library.
//
// Every quantity is an MPFR float whose mantissa width is taken from the
// process-wide default at construction time. PrecisionScope sets that
// default; it must be installed before any Real is created for a run and
// before worker threads are spawned.

#include <boost/multiprecision/mpfr.hpp>

#include <cstdint>
#include <string>

namespace offshell {

using Real = boost::multiprecision::number<
    boost::multiprecision::mpfr_float_backend<0>,
    boost::multiprecision::et_off>;

inline constexpr int kMinPrecisionBits = 53;
inline constexpr int kDefaultPrecisionBits = 256;

/// Mantissa bits of newly constructed Reals. MPFR rounds the request up to
/// a whole number of decimal digits, so this may exceed the requested width.
int current_precision_bits();

/// Width requested by the innermost live PrecisionScope (the library default
/// when none is installed).
int requested_precision_bits();

/// Sets the default precision (in bits) for the lifetime of the scope and
/// restores the previous value on destruction. Not thread-safe: install it
/// on the orchestrating thread only.
class PrecisionScope {
public:
    explicit PrecisionScope(int bits);
    ~PrecisionScope();

    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

    int bits() const { return bits_; }

private:
    unsigned previous_digits10_;
    int previous_requested_;
    int bits_;
};

/// Exact rational num/den at working precision.
inline Real ratio(std::int64_t num, std::int64_t den) {
    Real r(num);
    r /= Real(den);
    return r;
}

/// Copy of x rounded to the current default precision. Plain assignment
/// keeps the source's precision, so values created under another scope must
/// pass through here.
Real at_working_precision(const Real& x);

/// 2^exponent at working precision.
Real pow2(int exponent);

/// Decimal string with the given number of significant digits
/// (scientific notation, round-to-nearest). Deterministic for a given
/// precision and value.
std::string to_decimal(const Real& x, int significant_digits);

/// Parses a decimal string at working precision. Throws ConfigError when
/// the text is not a finite number.
Real parse_real(const std::string& text);

inline bool is_finite(const Real& x) { return boost::multiprecision::isfinite(x); }

}  // namespace offshell
