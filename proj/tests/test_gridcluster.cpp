#include <doctest.h>

#include <random>
#include <set>

#include "baire/errors.hpp"
#include "baire/gridcluster.hpp"
#include "oracle.hpp"

using namespace baire;

namespace {

std::vector<Record> three_records() {
    return {{"a", encode(0.478, 10, 3)}, {"b", encode(0.472, 10, 3)}, {"c", encode(0.900, 10, 3)}};
}

/// Bins "34":5, "35":4, "90":3 at level 2.
std::vector<Record> scenario() {
    std::vector<Record> r;
    auto add = [&](const std::string& prefix, int count) {
        for (int i = 0; i < count; ++i) {
            r.push_back({prefix + "_" + std::to_string(i),
                         DigitCode::from_string(prefix + std::to_string(i), 10)});
        }
    };
    add("34", 5);
    add("35", 4);
    add("90", 3);
    return r;
}

std::vector<std::string> names(const std::vector<BinStat>& s) {
    std::vector<std::string> v;
    for (const auto& b : s) v.push_back(b.prefix.to_string());
    return v;
}

std::set<std::string> members(const ClusterLabeling& l, int cluster) {
    std::set<std::string> s;
    for (std::size_t i = 0; i < l.ids.size(); ++i)
        if (l.labels[i] == cluster) s.insert(l.ids[i]);
    return s;
}

}  // namespace

TEST_CASE("densities, sorting and centers on the three record example") {
    const auto index = MadicIndex::build(three_records(), 10, 3);
    const auto stats = cell_densities(index, 1);
    REQUIRE(stats.size() == 2);
    CHECK(stats[0].prefix.to_string() == "4");
    CHECK(stats[0].density == 2);
    CHECK(stats[1].density == 1);
    CHECK(names(sort_by_density(stats)) == std::vector<std::string>{"4", "9"});
    CHECK(names(identify_centers(sort_by_density(stats), 2)) == std::vector<std::string>{"4"});
    CHECK(identify_centers(sort_by_density(stats), 1).size() == 2);
    CHECK(identify_centers(sort_by_density(stats), 3).empty());
    CHECK_THROWS_AS(cell_densities(index, 4), LevelError);
}

TEST_CASE("density ties break by prefix") {
    std::vector<BinStat> s{{DigitCode(10, {7}), 1, 2}, {DigitCode(10, {2}), 1, 2}, {DigitCode(10, {5}), 1, 3}};
    CHECK(names(sort_by_density(s)) == std::vector<std::string>{"5", "2", "7"});
    CHECK(sort_by_density({}).empty());
}

TEST_CASE("densities partition the records") {
    const auto records = oracle::random_records(150, 10, 4, 5);
    const auto index = MadicIndex::build(records, 10, 4);
    for (int l = 1; l <= 4; ++l) {
        std::size_t total = 0;
        for (const auto& s : cell_densities(index, l)) total += s.density;
        CHECK(total == records.size());
    }
}

TEST_CASE("neighbor chains form clusters") {
    const auto index = MadicIndex::build(scenario(), 10, 3);
    const auto labeling = grid_cluster(index, 2, 3);
    CHECK(labeling.cluster_count == 2);
    CHECK(labeling.noise_count() == 0);
    std::set<std::string> first;
    std::set<std::string> second;
    for (int i = 0; i < 5; ++i) first.insert("34_" + std::to_string(i));
    for (int i = 0; i < 4; ++i) first.insert("35_" + std::to_string(i));
    for (int i = 0; i < 3; ++i) second.insert("90_" + std::to_string(i));
    CHECK(members(labeling, 0) == first);
    CHECK(members(labeling, 1) == second);
    CHECK(labeling.label_of("90_2") == 1);
}

TEST_CASE("sparse cells join an adjacent cluster or become noise") {
    // "34":5 dense, "35":1 sparse and adjacent, "60":1 sparse and isolated.
    std::vector<Record> r;
    for (int i = 0; i < 5; ++i) r.push_back({"a" + std::to_string(i), DigitCode::from_string("34" + std::to_string(i), 10)});
    r.push_back({"b", DigitCode::from_string("350", 10)});
    r.push_back({"c", DigitCode::from_string("600", 10)});
    const auto index = MadicIndex::build(r, 10, 3);
    const auto labeling = grid_cluster(index, 2, 3);
    CHECK(labeling.cluster_count == 1);
    CHECK(labeling.label_of("b") == 0);
    CHECK(labeling.label_of("c") == kNoise);
    CHECK(labeling.noise_count() == 1);
}

TEST_CASE("sparse cell between two clusters joins the denser seed") {
    std::vector<Record> r;
    for (int i = 0; i < 3; ++i) r.push_back({"lo" + std::to_string(i), DigitCode::from_string("2" + std::to_string(i), 10)});
    r.push_back({"mid", DigitCode::from_string("30", 10)});
    for (int i = 0; i < 4; ++i) r.push_back({"hi" + std::to_string(i), DigitCode::from_string("4" + std::to_string(i), 10)});
    const auto index = MadicIndex::build(r, 10, 2);
    const auto labeling = grid_cluster(index, 1, 3);
    CHECK(labeling.cluster_count == 2);
    CHECK(labeling.label_of("hi0") == 0);
    CHECK(labeling.label_of("lo0") == 1);
    CHECK(labeling.label_of("mid") == 0);
}

TEST_CASE("degenerate thresholds") {
    const std::vector<Record> one{{"a", DigitCode(10, {1, 1})}, {"b", DigitCode(10, {1, 2})}};
    const auto single_bin = grid_cluster(MadicIndex::build(one, 10, 2), 1, 1);
    CHECK(single_bin.cluster_count == 1);
    CHECK(single_bin.noise_count() == 0);

    const auto index = MadicIndex::build(scenario(), 10, 3);
    const auto none = grid_cluster(index, 2, 6);
    CHECK(none.cluster_count == 0);
    CHECK(none.noise_count() == index.size());
    CHECK_THROWS_AS(grid_cluster(index, 2, 0), DomainError);
}

TEST_CASE("finest level with threshold one chains singletons") {
    const std::vector<Record> r{{"a", DigitCode::from_string("10", 10)},
                                {"b", DigitCode::from_string("11", 10)},
                                {"c", DigitCode::from_string("13", 10)},
                                {"d", DigitCode::from_string("14", 10)},
                                {"e", DigitCode::from_string("15", 10)},
                                {"f", DigitCode::from_string("50", 10)}};
    const auto labeling = grid_cluster(MadicIndex::build(r, 10, 2), 2, 1);
    CHECK(labeling.cluster_count == 3);
    CHECK(members(labeling, 0) == std::set<std::string>{"a", "b"});
    CHECK(members(labeling, 1) == std::set<std::string>{"c", "d", "e"});
    CHECK(members(labeling, 2) == std::set<std::string>{"f"});
}

TEST_CASE("labelings partition, are deterministic and shrink with the threshold") {
    const auto records = oracle::random_records(300, 10, 4, 61, 6);
    const auto index = MadicIndex::build(records, 10, 4);
    for (int level = 1; level <= 4; ++level) {
        std::size_t previous = index.size() + 1;
        for (std::size_t t = 1; t <= 12; ++t) {
            const auto l = grid_cluster(index, level, t);
            CHECK(l.ids.size() == index.size());
            CHECK(std::set<std::string>(l.ids.begin(), l.ids.end()).size() == index.size());
            const auto again = grid_cluster(index, level, t);
            CHECK(again.labels == l.labels);
            const auto clustered = index.size() - l.noise_count();
            CHECK(clustered <= previous);
            previous = clustered;
            if (level == 1) CHECK(l.cluster_count <= 10);
        }
    }
}

TEST_CASE("centers must come from the clustered level") {
    const auto index = MadicIndex::build(scenario(), 10, 3);
    const auto centers = identify_centers(sort_by_density(cell_densities(index, 1)), 1);
    CHECK_THROWS_AS(merge_neighbors(index, 2, centers, 1), LevelError);
}
