#pragma once

#include "baire/codec.hpp"

namespace baire {

/// Baire distance carried exactly as a longest-common-prefix length.
/// Larger lcp means closer; the real value is base^-lcp.
struct BaireProximity {
    int lcp = 0;
    int base = kDecimalBase;
    int cap = 0;  ///< min of the two operand precisions

    double value() const;

    /// Orders by distance: a nearer proximity compares less.
    friend bool operator<(const BaireProximity& a, const BaireProximity& b) { return a.lcp > b.lcp; }
    friend bool operator==(const BaireProximity&, const BaireProximity&) = default;
};

/// Longest common prefix, capped at the shorter code.
int lcp(const DigitCode& a, const DigitCode& b);

BaireProximity baire_distance(const DigitCode& a, const DigitCode& b);

/// lcp(a,c) >= min(lcp(a,b), lcp(b,c)): the strong triangle inequality in
/// integer form.
bool check_ultrametric_triplet(const DigitCode& a, const DigitCode& b, const DigitCode& c);

/// True when the two largest pairwise distances are equal (equilateral
/// triplets included).
bool check_isosceles(const DigitCode& a, const DigitCode& b, const DigitCode& c);

}  // namespace baire
