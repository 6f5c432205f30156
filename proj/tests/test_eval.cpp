#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "baire/errors.hpp"
#include "baire/eval.hpp"
#include "baire/metric.hpp"
#include "oracle.hpp"

using namespace baire;

namespace {

Dataset blobs(std::size_t per_blob, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 0.1);
    Dataset d(2 * per_blob, 2);
    for (std::size_t i = 0; i < 2 * per_blob; ++i) {
        const double centre = i < per_blob ? 0.0 : 10.0;
        d(i, 0) = centre + g(rng);
        d(i, 1) = centre + g(rng);
    }
    return d;
}

}  // namespace

TEST_CASE("k equal to n puts every point alone") {
    Dataset d(5, 2, {0, 0, 1, 0, 0, 1, 5, 5, 9, 2});
    const auto r = kmeans(d, 5, 3, 50);
    CHECK(std::set<int>(r.labels.begin(), r.labels.end()).size() == 5);
    CHECK(r.inertia() == 0.0);
    CHECK(r.converged);
}

TEST_CASE("k equal to one finds the mean") {
    Dataset d(4, 2, {0, 0, 2, 0, 2, 2, 0, 6});
    const auto r = kmeans(d, 1, 9, 10);
    CHECK(std::all_of(r.labels.begin(), r.labels.end(), [](int l) { return l == 0; }));
    CHECK(r.centroids(0, 0) == doctest::Approx(1.0));
    CHECK(r.centroids(0, 1) == doctest::Approx(2.0));
}

TEST_CASE("two separated blobs are recovered") {
    const auto d = blobs(50, 12);
    for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull}) {
        const auto r = kmeans(d, 2, seed, 100);
        CHECK(r.converged);
        // Every point sits with its own blob, and is nearest its own centroid.
        for (std::size_t i = 0; i < 50; ++i) CHECK(r.labels[i] == r.labels[0]);
        for (std::size_t i = 50; i < 100; ++i) CHECK(r.labels[i] == r.labels[50]);
        CHECK(r.labels[0] != r.labels[50]);
        for (std::size_t i = 0; i < d.rows(); ++i) {
            const auto own = static_cast<std::size_t>(r.labels[i]);
            CHECK(squared_euclidean(d.row(i), r.centroids.row(own)) <=
                  squared_euclidean(d.row(i), r.centroids.row(1 - own)));
        }
    }
}

TEST_CASE("inertia never increases and runs are reproducible") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Dataset d(300, 3);
    for (std::size_t i = 0; i < d.rows(); ++i)
        for (std::size_t j = 0; j < 3; ++j) d(i, j) = u(rng);
    for (std::size_t k : {2u, 5u, 17u}) {
        const auto r = kmeans(d, k, 77, 200);
        for (std::size_t i = 1; i < r.inertia_history.size(); ++i) {
            CHECK(r.inertia_history[i] <= r.inertia_history[i - 1] * (1 + 1e-12));
        }
        CHECK(kmeans(d, k, 77, 200).labels == r.labels);
    }
}

TEST_CASE("empty clusters are re-seeded") {
    // Duplicate rows force repeated initial centroids.
    Dataset d(4, 1, {0, 0, 0, 10});
    const auto r = kmeans(d, 3, 5, 20);
    CHECK(r.labels.size() == 4);
    CHECK(r.labels[3] != r.labels[0]);
}

TEST_CASE("kmeans argument checks") {
    Dataset d(3, 1, {0, 1, 2});
    CHECK_THROWS_AS(kmeans(d, 0, 1, 10), DomainError);
    CHECK_THROWS_AS(kmeans(d, 4, 1, 10), DomainError);
    CHECK_THROWS_AS(kmeans(d, 2, 1, 0), DomainError);
}

TEST_CASE("rand index small cases") {
    const std::vector<int> a{0, 0, 1, 1};
    const std::vector<int> b{0, 1, 0, 1};
    const auto s = rand_index(a, b);
    CHECK(s.rand_index == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(s.total_pairs() == 6);
    CHECK(s.agree_same == 0);
    CHECK(s.agree_diff == 2);
    CHECK(s.disagree == 4);

    CHECK(rand_index(a, a).rand_index == 1.0);
    CHECK(rand_index(std::vector<int>{0, 0}, std::vector<int>{0, 1}).rand_index == 0.0);
    CHECK_THROWS_AS(rand_index(a, std::vector<int>{0}), MismatchError);

    const std::map<std::string, int> ma{{"p", 0}, {"q", 0}};
    const std::map<std::string, int> mb{{"p", 0}, {"r", 0}};
    CHECK_THROWS_AS(rand_index(ma, mb), MismatchError);
    CHECK(rand_index(ma, ma).rand_index == 1.0);
}

TEST_CASE("rand index matches pair enumeration, is symmetric and label-blind") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + rng() % 60;
        std::vector<int> a(n);
        std::vector<int> b(n);
        for (auto& x : a) x = static_cast<int>(rng() % 4) - 1;
        for (auto& x : b) x = static_cast<int>(rng() % 5);
        const auto s = rand_index(a, b);
        const auto o = oracle::pair_enumeration(a, b);
        CHECK(s.agree_same == o.agree_same);
        CHECK(s.agree_diff == o.agree_diff);
        CHECK(s.disagree == o.disagree);
        CHECK(s.rand_index == o.rand_index());
        CHECK(rand_index(b, a).rand_index == s.rand_index);
        auto relabeled = a;
        for (auto& x : relabeled) x = 100 - 7 * x;
        CHECK(rand_index(relabeled, b).rand_index == s.rand_index);
    }
}

TEST_CASE("ultrametricity of simple shapes") {
    const Dataset line(3, 1, {0, 1, 2});
    const auto r = ultrametricity_alpha(line, 1, 0.1, 1);
    CHECK(r.alpha == 0.0);
    CHECK(r.triplets_sampled == 1);

    const Dataset tri(3, 2, {0, 0, 1, 0, 0.5, 0.86602540378443864676});
    CHECK(ultrametricity_alpha(tri, 1, 1e-9, 1).alpha == 1.0);
    CHECK_THROWS_AS(ultrametricity_alpha(Dataset(2, 1, {0, 1}), 1, 0.1, 1), DomainError);
    CHECK_THROWS_AS(ultrametricity_alpha(line, 1, -0.5, 1), DomainError);
}

TEST_CASE("Baire distances are exactly ultrametric") {
    const auto records = oracle::random_records(200, 10, 6, 3);
    std::vector<DigitCode> codes;
    for (const auto& r : records) codes.push_back(r.code);
    const auto r = ultrametricity_alpha(codes, 5000, 0.0, 9);
    CHECK(r.alpha == 1.0);
    CHECK(r.triplets_sampled == 5000);
}

TEST_CASE("uniform cloud is not ultrametric at zero tolerance") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Dataset d(50, 2);
    for (std::size_t i = 0; i < 50; ++i) d(i, 0) = u(rng), d(i, 1) = u(rng);
    const auto r = ultrametricity_alpha(d, 1000, 0.0, 4);
    CHECK(r.alpha < 0.05);
    CHECK(ultrametricity_alpha(d, 1000, 0.0, 4).alpha == r.alpha);
}

TEST_CASE("scaling benchmark reads every record once") {
    const std::vector<std::size_t> sizes{10, 100, 1000};
    const auto rows = scaling_benchmark(sizes, 10, 4, 1);
    REQUIRE(rows.size() == 3);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].n == sizes[i]);
        CHECK(rows[i].reads == sizes[i]);
        CHECK(rows[i].build_seconds >= 0.0);
    }
    const std::vector<std::size_t> unsorted{100, 10};
    CHECK_THROWS_AS(scaling_benchmark(unsorted, 10, 4, 1), DomainError);
}
