#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "baire/codec.hpp"

namespace baire {

/// Row-major block of n observations over d attributes.
class Dataset {
public:
    Dataset() = default;
    Dataset(std::size_t rows, std::size_t cols);
    Dataset(std::size_t rows, std::size_t cols, std::vector<double> values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::span<const double> row(std::size_t i) const { return {values_.data() + i * cols_, cols_}; }
    std::span<double> row(std::size_t i) { return {values_.data() + i * cols_, cols_}; }
    double operator()(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return values_[i * cols_ + j]; }
    std::span<const double> values() const noexcept { return values_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

double squared_euclidean(std::span<const double> a, std::span<const double> b);

struct KMeansResult {
    std::vector<int> labels;
    Dataset centroids;
    std::vector<double> inertia_history;  ///< one entry per assignment step
    std::size_t iterations = 0;
    bool converged = false;

    double inertia() const { return inertia_history.empty() ? 0.0 : inertia_history.back(); }
};

/// Lloyd's algorithm from k distinct rows drawn with std::mt19937_64(seed).
/// Stops at an assignment fixpoint or after max_iters assignment steps. An
/// emptied cluster is re-seeded at the point farthest from its centroid.
KMeansResult kmeans(const Dataset& data, std::size_t k, std::uint64_t seed, std::size_t max_iters);

struct PartitionScore {
    double rand_index = 1.0;
    std::uint64_t agree_same = 0;  ///< pairs together in both
    std::uint64_t agree_diff = 0;  ///< pairs apart in both
    std::uint64_t disagree = 0;

    std::uint64_t total_pairs() const noexcept { return agree_same + agree_diff + disagree; }
};

/// Labels are compared as given; a noise label is one more group.
PartitionScore rand_index(std::span<const int> a, std::span<const int> b);
PartitionScore rand_index(const std::map<std::string, int>& a, const std::map<std::string, int>& b);

struct UltrametricityReport {
    double alpha = 0.0;
    std::size_t triplets_sampled = 0;
    double tolerance = 0.0;
};

using DistanceFn = std::function<double(std::size_t, std::size_t)>;

/// Fraction of sampled distinct triplets whose sorted distances s <= m <= l
/// satisfy (l - m) / l <= tolerance. When sample_size reaches the number of
/// triplets, all of them are used.
UltrametricityReport ultrametricity_alpha(std::size_t n, const DistanceFn& distance, std::size_t sample_size,
                                          double tolerance, std::uint64_t seed);

/// Euclidean distances between rows.
UltrametricityReport ultrametricity_alpha(const Dataset& data, std::size_t sample_size, double tolerance,
                                          std::uint64_t seed);

/// Baire distances between codes.
UltrametricityReport ultrametricity_alpha(std::span<const DigitCode> codes, std::size_t sample_size,
                                          double tolerance, std::uint64_t seed);

struct BenchRow {
    std::size_t n = 0;
    double build_seconds = 0.0;
    std::size_t reads = 0;
};

/// For each size: seeded uniform scalars, encoded, then a timed build.
std::vector<BenchRow> scaling_benchmark(std::span<const std::size_t> sizes, int base, int precision,
                                        std::uint64_t seed);

}  // namespace baire
