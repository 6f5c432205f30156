#include "baire/eval.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <unordered_map>

#include "baire/errors.hpp"
#include "baire/index.hpp"
#include "baire/metric.hpp"

namespace baire {

namespace {

// Modulo reduction keeps draws identical on every standard library.
std::size_t draw_below(std::mt19937_64& engine, std::size_t bound) {
    return static_cast<std::size_t>(engine() % static_cast<std::uint64_t>(bound));
}

std::uint64_t pairs(std::uint64_t m) { return m < 2 ? 0 : m * (m - 1) / 2; }

struct Assignment {
    std::vector<int> labels;
    std::vector<double> dist;  ///< squared distance to the assigned centroid
    double inertia = 0.0;
};

Assignment assign(const Dataset& data, const Dataset& centroids) {
    Assignment a;
    a.labels.resize(data.rows());
    a.dist.resize(data.rows());
    for (std::size_t i = 0; i < data.rows(); ++i) {
        int best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < centroids.rows(); ++c) {
            const double d = squared_euclidean(data.row(i), centroids.row(c));
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(c);
            }
        }
        a.labels[i] = best;
        a.dist[i] = best_d;
        a.inertia += best_d;
    }
    return a;
}

}  // namespace

Dataset::Dataset(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}

Dataset::Dataset(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
    if (values_.size() != rows_ * cols_) throw MismatchError("dataset values do not match its shape");
}

double squared_euclidean(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

KMeansResult kmeans(const Dataset& data, std::size_t k, std::uint64_t seed, std::size_t max_iters) {
    const std::size_t n = data.rows();
    if (k < 1 || k > n) throw DomainError("k must lie in [1, " + std::to_string(n) + "], got " + std::to_string(k));
    if (max_iters < 1) throw DomainError("max_iters must be at least 1");

    // Shuffle the row order, then take the first k rows with distinct values,
    // topping up with repeats only when the data has fewer than k.
    std::mt19937_64 engine(seed);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[draw_below(engine, i)]);

    std::vector<std::size_t> chosen;
    std::vector<bool> taken(n, false);
    for (auto r : order) {
        if (chosen.size() == k) break;
        const bool repeat = std::any_of(chosen.begin(), chosen.end(), [&](std::size_t c) {
            return std::equal(data.row(r).begin(), data.row(r).end(), data.row(c).begin());
        });
        if (!repeat) {
            chosen.push_back(r);
            taken[r] = true;
        }
    }
    for (auto r : order) {
        if (chosen.size() == k) break;
        if (!taken[r]) chosen.push_back(r);
    }

    KMeansResult result;
    result.centroids = Dataset(k, data.cols());
    for (std::size_t c = 0; c < k; ++c) {
        std::copy(data.row(chosen[c]).begin(), data.row(chosen[c]).end(), result.centroids.row(c).begin());
    }

    auto current = assign(data, result.centroids);
    result.inertia_history.push_back(current.inertia);
    while (result.iterations < max_iters) {
        ++result.iterations;

        Dataset sums(k, data.cols());
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = static_cast<std::size_t>(current.labels[i]);
            ++counts[c];
            auto s = sums.row(c);
            const auto x = data.row(i);
            for (std::size_t j = 0; j < x.size(); ++j) s[j] += x[j];
        }
        for (std::size_t c = 0; c < k; ++c) {
            auto centroid = result.centroids.row(c);
            if (counts[c] == 0) {
                const auto far = static_cast<std::size_t>(
                    std::max_element(current.dist.begin(), current.dist.end()) - current.dist.begin());
                std::copy(data.row(far).begin(), data.row(far).end(), centroid.begin());
                current.dist[far] = 0.0;
                continue;
            }
            const auto s = sums.row(c);
            for (std::size_t j = 0; j < s.size(); ++j) centroid[j] = s[j] / static_cast<double>(counts[c]);
        }

        auto next = assign(data, result.centroids);
        result.inertia_history.push_back(next.inertia);
        const bool fixpoint = next.labels == current.labels;
        current = std::move(next);
        if (fixpoint) {
            result.converged = true;
            break;
        }
    }
    result.labels = std::move(current.labels);
    return result;
}

PartitionScore rand_index(std::span<const int> a, std::span<const int> b) {
    if (a.size() != b.size()) throw MismatchError("labelings cover different numbers of records");
    std::map<std::pair<int, int>, std::uint64_t> joint;
    std::unordered_map<int, std::uint64_t> count_a;
    std::unordered_map<int, std::uint64_t> count_b;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ++joint[{a[i], b[i]}];
        ++count_a[a[i]];
        ++count_b[b[i]];
    }
    std::uint64_t both = 0;
    std::uint64_t same_a = 0;
    std::uint64_t same_b = 0;
    for (const auto& [key, m] : joint) both += pairs(m);
    for (const auto& [key, m] : count_a) same_a += pairs(m);
    for (const auto& [key, m] : count_b) same_b += pairs(m);

    PartitionScore s;
    const std::uint64_t total = pairs(a.size());
    s.agree_same = both;
    s.disagree = same_a + same_b - 2 * both;
    s.agree_diff = total - s.agree_same - s.disagree;
    s.rand_index = total == 0 ? 1.0 : static_cast<double>(s.agree_same + s.agree_diff) / static_cast<double>(total);
    return s;
}

PartitionScore rand_index(const std::map<std::string, int>& a, const std::map<std::string, int>& b) {
    if (a.size() != b.size()) throw MismatchError("labelings cover different id sets");
    std::vector<int> la;
    std::vector<int> lb;
    la.reserve(a.size());
    lb.reserve(b.size());
    for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib) {
        if (ia->first != ib->first) throw MismatchError("labelings cover different id sets");
        la.push_back(ia->second);
        lb.push_back(ib->second);
    }
    return rand_index(la, lb);
}

UltrametricityReport ultrametricity_alpha(std::size_t n, const DistanceFn& distance, std::size_t sample_size,
                                          double tolerance, std::uint64_t seed) {
    if (n < 3) throw DomainError("ultrametricity needs at least 3 points");
    if (!(tolerance >= 0.0)) throw DomainError("tolerance must be non-negative");
    if (sample_size < 1) throw DomainError("sample_size must be at least 1");

    auto qualifies = [&](std::size_t i, std::size_t j, std::size_t k) {
        std::array<double, 3> d{distance(i, j), distance(j, k), distance(i, k)};
        std::sort(d.begin(), d.end());
        if (d[2] == 0.0) return true;
        return (d[2] - d[1]) / d[2] <= tolerance;
    };

    const auto un = static_cast<long double>(n);
    const long double all = un * (un - 1) * (un - 2) / 6;
    std::size_t hits = 0;
    std::size_t sampled = 0;
    if (static_cast<long double>(sample_size) >= all) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                for (std::size_t k = j + 1; k < n; ++k) {
                    hits += qualifies(i, j, k) ? 1 : 0;
                    ++sampled;
                }
    } else {
        std::mt19937_64 engine(seed);
        std::set<std::array<std::size_t, 3>> seen;
        while (sampled < sample_size) {
            std::array<std::size_t, 3> t{draw_below(engine, n), draw_below(engine, n), draw_below(engine, n)};
            std::sort(t.begin(), t.end());
            if (t[0] == t[1] || t[1] == t[2] || !seen.insert(t).second) continue;
            hits += qualifies(t[0], t[1], t[2]) ? 1 : 0;
            ++sampled;
        }
    }
    return {static_cast<double>(hits) / static_cast<double>(sampled), sampled, tolerance};
}

UltrametricityReport ultrametricity_alpha(const Dataset& data, std::size_t sample_size, double tolerance,
                                          std::uint64_t seed) {
    return ultrametricity_alpha(
        data.rows(), [&](std::size_t i, std::size_t j) { return std::sqrt(squared_euclidean(data.row(i), data.row(j))); },
        sample_size, tolerance, seed);
}

UltrametricityReport ultrametricity_alpha(std::span<const DigitCode> codes, std::size_t sample_size,
                                          double tolerance, std::uint64_t seed) {
    return ultrametricity_alpha(
        codes.size(), [&](std::size_t i, std::size_t j) { return baire_distance(codes[i], codes[j]).value(); },
        sample_size, tolerance, seed);
}

std::vector<BenchRow> scaling_benchmark(std::span<const std::size_t> sizes, int base, int precision,
                                        std::uint64_t seed) {
    if (!std::is_sorted(sizes.begin(), sizes.end())) throw DomainError("benchmark sizes must be ascending");
    std::vector<BenchRow> table;
    table.reserve(sizes.size());
    for (auto n : sizes) {
        std::mt19937_64 engine(seed);
        std::vector<Record> records;
        records.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
            records.push_back({"r" + std::to_string(i), encode(u, base, precision)});
        }
        const auto start = std::chrono::steady_clock::now();
        const auto index = MadicIndex::build(records, base, precision);
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        table.push_back({n, elapsed.count(), index.scan_count()});
    }
    return table;
}

}  // namespace baire
