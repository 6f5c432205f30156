#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "baire/index.hpp"

namespace baire {

/// A grid cell of the chosen level and its member count.
struct BinStat {
    DigitCode prefix;
    int level = 0;
    std::size_t density = 0;
};

inline constexpr int kNoise = -1;

/// Cluster label per record, aligned with the index's insertion order.
struct ClusterLabeling {
    int level = 0;
    std::vector<std::string> ids;
    std::vector<int> labels;  ///< cluster id, or kNoise
    std::size_t cluster_count = 0;

    std::size_t noise_count() const;
    int label_of(std::string_view id) const;
};

/// Grid cells are the existing bins at `level`; nothing new is built.
std::vector<BinStat> cell_densities(const MadicIndex& index, int level);

/// Descending density, ties by ascending prefix.
std::vector<BinStat> sort_by_density(std::vector<BinStat> stats);

/// Cells with density >= min_density, keeping the sorted order.
std::vector<BinStat> identify_centers(std::span<const BinStat> sorted, std::size_t min_density);

/// Chains neighboring cells into clusters.
///
/// Two cells at the same level are neighbors when their prefixes, read as
/// base-B integers, differ by one. A maximal run of neighboring cells at or
/// above `min_density` that holds a center becomes one cluster, seeded by
/// its densest center. Cluster ids follow descending seed density (ties by
/// seed prefix). A sparse cell adjacent to a cluster joins it; when it
/// touches two clusters it joins the one with the smaller id. Every other
/// sparse cell is noise.
ClusterLabeling merge_neighbors(const MadicIndex& index, int level, std::span<const BinStat> centers,
                                std::size_t min_density);

/// densities -> sort -> centers -> merge.
ClusterLabeling grid_cluster(const MadicIndex& index, int level, std::size_t min_density);

}  // namespace baire
