#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace baire {

inline constexpr int kMinBase = 2;
inline constexpr int kMaxBase = 36;
inline constexpr int kDecimalBase = 10;
inline constexpr int kBooleanBase = 2;

/// Largest precision p for which base^p <= 2^53, so that value * base^p is
/// exactly representable before rounding.
int max_precision(int base);

/// base^exponent as an unsigned integer. Caller guarantees no overflow.
std::uint64_t int_pow(int base, int exponent);

/// A scalar's m-adic digits at fixed base and precision, most significant
/// digit first. The first digit is the first place after the radix point.
class DigitCode {
public:
    DigitCode(int base, std::vector<std::uint8_t> digits);

    /// Parses a digit string ("0"-"9", then "a"-"z").
    static DigitCode from_string(std::string_view text, int base);

    /// Builds the code whose digits spell `value` in `precision` places.
    static DigitCode from_integer(std::uint64_t value, int base, int precision);

    int base() const noexcept { return base_; }
    int precision() const noexcept { return static_cast<int>(digits_.size()); }
    std::span<const std::uint8_t> digits() const noexcept { return digits_; }
    std::uint8_t operator[](std::size_t i) const { return digits_[i]; }

    /// The first `level` digits read as a base-B integer.
    std::uint64_t prefix_value(int level) const;

    std::string to_string() const;

    friend bool operator==(const DigitCode&, const DigitCode&) = default;

private:
    int base_;
    std::vector<std::uint8_t> digits_;
};

/// Affine bounds mapping [lo, hi] onto [0, 1].
struct NormalizationBounds {
    double lo = 0.0;
    double hi = 0.0;

    NormalizationBounds() = default;
    NormalizationBounds(double lo, double hi);

    static NormalizationBounds fit(std::span<const double> values);

    bool degenerate() const noexcept { return lo == hi; }
    bool contains(double v) const noexcept { return v >= lo && v <= hi; }
};

/// Digits of round(value * base^precision), clamped to base^precision - 1.
/// Rounding is half away from zero.
DigitCode encode(double value, int base, int precision);

/// Sum of d_i * base^-i.
double decode(const DigitCode& code);

/// (v - lo) / (hi - lo); degenerate bounds send everything to 0.
/// Throws RangeError for a value outside the bounds.
std::vector<double> normalize(std::span<const double> values, const NormalizationBounds& bounds);
double normalize(double value, const NormalizationBounds& bounds);

/// Like normalize, but out-of-bounds values are pinned to the nearest bound.
/// `clamped` is set when that happened.
double normalize_clamped(double value, const NormalizationBounds& bounds, bool& clamped);

/// Length-`new_precision` prefix of `code`.
DigitCode truncate(const DigitCode& code, int new_precision);

}  // namespace baire
