#include "baire/codec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "baire/errors.hpp"

namespace baire {

namespace {

constexpr std::uint64_t kExactLimit = std::uint64_t{1} << 53;

void check_base(int base) {
    if (base < kMinBase || base > kMaxBase) {
        throw DomainError("base must lie in [2, 36], got " + std::to_string(base));
    }
}

void check_precision(int base, int precision) {
    if (precision < 1) {
        throw DomainError("precision must be at least 1, got " + std::to_string(precision));
    }
    if (precision > max_precision(base)) {
        throw DomainError("precision " + std::to_string(precision) + " exceeds the maximum of " +
                          std::to_string(max_precision(base)) + " for base " + std::to_string(base));
    }
}

char digit_char(std::uint8_t d) {
    return d < 10 ? static_cast<char>('0' + d) : static_cast<char>('a' + (d - 10));
}

int digit_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'z') return c - 'a' + 10;
    if (c >= 'A' && c <= 'Z') return c - 'A' + 10;
    return -1;
}

}  // namespace

int max_precision(int base) {
    check_base(base);
    int p = 0;
    std::uint64_t scale = 1;
    while (scale <= kExactLimit / static_cast<std::uint64_t>(base)) {
        scale *= static_cast<std::uint64_t>(base);
        ++p;
    }
    return p;
}

std::uint64_t int_pow(int base, int exponent) {
    std::uint64_t r = 1;
    for (int i = 0; i < exponent; ++i) r *= static_cast<std::uint64_t>(base);
    return r;
}

DigitCode::DigitCode(int base, std::vector<std::uint8_t> digits) : base_(base), digits_(std::move(digits)) {
    check_base(base_);
    if (digits_.empty()) {
        throw DomainError("a digit code needs at least one digit");
    }
    for (auto d : digits_) {
        if (d >= base_) {
            throw DomainError("digit " + std::to_string(d) + " out of range for base " + std::to_string(base_));
        }
    }
}

DigitCode DigitCode::from_string(std::string_view text, int base) {
    check_base(base);
    std::vector<std::uint8_t> digits;
    digits.reserve(text.size());
    for (char c : text) {
        const int v = digit_value(c);
        if (v < 0 || v >= base) {
            throw DomainError("invalid digit '" + std::string(1, c) + "' for base " + std::to_string(base));
        }
        digits.push_back(static_cast<std::uint8_t>(v));
    }
    return DigitCode(base, std::move(digits));
}

DigitCode DigitCode::from_integer(std::uint64_t value, int base, int precision) {
    check_base(base);
    if (precision < 1) throw DomainError("precision must be at least 1");
    std::vector<std::uint8_t> digits(static_cast<std::size_t>(precision));
    const auto b = static_cast<std::uint64_t>(base);
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
        *it = static_cast<std::uint8_t>(value % b);
        value /= b;
    }
    if (value != 0) {
        throw DomainError("integer does not fit in " + std::to_string(precision) + " digits");
    }
    return DigitCode(base, std::move(digits));
}

std::uint64_t DigitCode::prefix_value(int level) const {
    std::uint64_t v = 0;
    const auto b = static_cast<std::uint64_t>(base_);
    for (int i = 0; i < level; ++i) v = v * b + digits_[static_cast<std::size_t>(i)];
    return v;
}

std::string DigitCode::to_string() const {
    std::string s;
    s.reserve(digits_.size());
    for (auto d : digits_) s.push_back(digit_char(d));
    return s;
}

NormalizationBounds::NormalizationBounds(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
        throw DomainError("normalization bounds need finite lo <= hi");
    }
}

NormalizationBounds NormalizationBounds::fit(std::span<const double> values) {
    if (values.empty()) {
        throw DomainError("cannot fit bounds to an empty sample");
    }
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    return {*mn, *mx};
}

DigitCode encode(double value, int base, int precision) {
    check_base(base);
    check_precision(base, precision);
    if (!(value >= 0.0 && value <= 1.0)) {
        throw DomainError("encode expects a value in [0, 1]");
    }
    const std::uint64_t scale = int_pow(base, precision);
    // std::round rounds halfway cases away from zero.
    auto scaled = static_cast<std::uint64_t>(std::round(value * static_cast<double>(scale)));
    scaled = std::min(scaled, scale - 1);
    return DigitCode::from_integer(scaled, base, precision);
}

double decode(const DigitCode& code) {
    const auto scale = int_pow(code.base(), code.precision());
    return static_cast<double>(code.prefix_value(code.precision())) / static_cast<double>(scale);
}

double normalize(double value, const NormalizationBounds& bounds) {
    if (!std::isfinite(value)) throw DomainError("cannot normalize a non-finite value");
    if (!bounds.contains(value)) {
        throw RangeError("value " + std::to_string(value) + " outside bounds [" + std::to_string(bounds.lo) + ", " +
                         std::to_string(bounds.hi) + "]");
    }
    if (bounds.degenerate()) return 0.0;
    // Guard against 1 ulp overshoot from the division.
    return std::clamp((value - bounds.lo) / (bounds.hi - bounds.lo), 0.0, 1.0);
}

std::vector<double> normalize(std::span<const double> values, const NormalizationBounds& bounds) {
    std::vector<double> out;
    out.reserve(values.size());
    for (double v : values) out.push_back(normalize(v, bounds));
    return out;
}

double normalize_clamped(double value, const NormalizationBounds& bounds, bool& clamped) {
    if (!std::isfinite(value)) throw DomainError("cannot normalize a non-finite value");
    clamped = !bounds.contains(value);
    return normalize(std::clamp(value, bounds.lo, bounds.hi), bounds);
}

DigitCode truncate(const DigitCode& code, int new_precision) {
    if (new_precision < 1 || new_precision > code.precision()) {
        throw DomainError("cannot truncate a precision-" + std::to_string(code.precision()) + " code to " +
                          std::to_string(new_precision) + " digits");
    }
    auto d = code.digits().first(static_cast<std::size_t>(new_precision));
    return DigitCode(code.base(), {d.begin(), d.end()});
}

}  // namespace baire
