#include "baire/metric.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "baire/errors.hpp"

namespace baire {

namespace {

void check_same_base(const DigitCode& a, const DigitCode& b) {
    if (a.base() != b.base()) {
        throw MismatchError("base mismatch: " + std::to_string(a.base()) + " vs " + std::to_string(b.base()));
    }
}

}  // namespace

double BaireProximity::value() const { return std::pow(static_cast<double>(base), -lcp); }

int lcp(const DigitCode& a, const DigitCode& b) {
    check_same_base(a, b);
    const auto da = a.digits();
    const auto db = b.digits();
    const auto n = std::min(da.size(), db.size());
    const auto mm = std::mismatch(da.begin(), da.begin() + static_cast<std::ptrdiff_t>(n), db.begin());
    return static_cast<int>(mm.first - da.begin());
}

BaireProximity baire_distance(const DigitCode& a, const DigitCode& b) {
    return {lcp(a, b), a.base(), std::min(a.precision(), b.precision())};
}

bool check_ultrametric_triplet(const DigitCode& a, const DigitCode& b, const DigitCode& c) {
    return lcp(a, c) >= std::min(lcp(a, b), lcp(b, c));
}

bool check_isosceles(const DigitCode& a, const DigitCode& b, const DigitCode& c) {
    std::array<int, 3> l{lcp(a, b), lcp(b, c), lcp(a, c)};
    std::sort(l.begin(), l.end());
    // Two largest distances are the two smallest lcps.
    return l[0] == l[1];
}

}  // namespace baire
