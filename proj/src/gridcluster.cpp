#include "baire/gridcluster.hpp"

#include <algorithm>
#include <unordered_map>

#include "baire/errors.hpp"

namespace baire {

namespace {

bool denser(const BinStat& a, const BinStat& b) {
    if (a.density != b.density) return a.density > b.density;
    const auto da = a.prefix.digits();
    const auto db = b.prefix.digits();
    return std::lexicographical_compare(da.begin(), da.end(), db.begin(), db.end());
}

}  // namespace

std::size_t ClusterLabeling::noise_count() const {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), kNoise));
}

int ClusterLabeling::label_of(std::string_view id) const {
    auto it = std::find(ids.begin(), ids.end(), id);
    if (it == ids.end()) throw UnknownIdError("unknown record id '" + std::string(id) + "'");
    return labels[static_cast<std::size_t>(it - ids.begin())];
}

std::vector<BinStat> cell_densities(const MadicIndex& index, int level) {
    auto bins = index.bins_at_level(level);
    std::vector<BinStat> stats;
    stats.reserve(bins.size());
    for (auto& b : bins) stats.push_back({std::move(b.prefix), b.level, b.members.size()});
    return stats;
}

std::vector<BinStat> sort_by_density(std::vector<BinStat> stats) {
    std::stable_sort(stats.begin(), stats.end(), denser);
    return stats;
}

std::vector<BinStat> identify_centers(std::span<const BinStat> sorted, std::size_t min_density) {
    if (min_density < 1) throw DomainError("min_density must be at least 1");
    std::vector<BinStat> centers;
    std::copy_if(sorted.begin(), sorted.end(), std::back_inserter(centers),
                 [&](const BinStat& s) { return s.density >= min_density; });
    return centers;
}

ClusterLabeling merge_neighbors(const MadicIndex& index, int level, std::span<const BinStat> centers,
                                std::size_t min_density) {
    if (min_density < 1) throw DomainError("min_density must be at least 1");
    const auto bins = index.bins_at_level(level);
    const auto n_bins = bins.size();

    std::vector<std::uint64_t> prefix(n_bins);
    std::unordered_map<std::uint64_t, std::size_t> position;
    for (std::size_t i = 0; i < n_bins; ++i) {
        prefix[i] = bins[i].prefix.prefix_value(level);
        position.emplace(prefix[i], i);
    }

    std::vector<bool> is_center(n_bins, false);
    for (const auto& c : centers) {
        if (c.level != level) throw LevelError("center taken from level " + std::to_string(c.level));
        auto it = position.find(c.prefix.prefix_value(level));
        if (it == position.end()) throw DomainError("center " + c.prefix.to_string() + " is not a bin of the index");
        is_center[it->second] = true;
    }

    auto dense = [&](std::size_t i) { return bins[i].members.size() >= min_density; };

    // Bins are sorted by prefix, so chains are runs of consecutive integers.
    struct Chain {
        std::size_t first;
        std::size_t last;
        std::size_t seed;
    };
    std::vector<Chain> chains;
    for (std::size_t i = 0; i < n_bins;) {
        if (!dense(i)) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < n_bins && dense(j + 1) && prefix[j + 1] == prefix[j] + 1) ++j;
        std::size_t seed = n_bins;
        for (std::size_t k = i; k <= j; ++k) {
            if (is_center[k] && (seed == n_bins || bins[k].members.size() > bins[seed].members.size())) seed = k;
        }
        if (seed != n_bins) chains.push_back({i, j, seed});
        i = j + 1;
    }
    std::stable_sort(chains.begin(), chains.end(), [&](const Chain& a, const Chain& b) {
        const auto da = bins[a.seed].members.size();
        const auto db = bins[b.seed].members.size();
        return da != db ? da > db : prefix[a.seed] < prefix[b.seed];
    });

    std::vector<int> bin_label(n_bins, kNoise);
    for (std::size_t c = 0; c < chains.size(); ++c) {
        for (std::size_t k = chains[c].first; k <= chains[c].last; ++k) bin_label[k] = static_cast<int>(c);
    }

    // Sparse cells next to a cluster join it.
    auto attached = bin_label;
    for (std::size_t i = 0; i < n_bins; ++i) {
        if (bin_label[i] != kNoise) continue;
        int best = kNoise;
        auto consider = [&](std::size_t k) {
            const int l = bin_label[k];
            if (l != kNoise && (best == kNoise || l < best)) best = l;
        };
        if (i > 0 && prefix[i - 1] + 1 == prefix[i]) consider(i - 1);
        if (i + 1 < n_bins && prefix[i] + 1 == prefix[i + 1]) consider(i + 1);
        attached[i] = best;
    }

    ClusterLabeling out;
    out.level = level;
    out.cluster_count = chains.size();
    out.ids.assign(index.ids().begin(), index.ids().end());
    std::unordered_map<std::string_view, std::size_t> slot;
    slot.reserve(out.ids.size());
    for (std::size_t i = 0; i < out.ids.size(); ++i) slot.emplace(out.ids[i], i);
    out.labels.assign(out.ids.size(), kNoise);
    for (std::size_t i = 0; i < n_bins; ++i) {
        for (const auto& m : bins[i].members) out.labels[slot.at(m)] = attached[i];
    }
    return out;
}

ClusterLabeling grid_cluster(const MadicIndex& index, int level, std::size_t min_density) {
    const auto sorted = sort_by_density(cell_densities(index, level));
    const auto centers = identify_centers(sorted, min_density);
    return merge_neighbors(index, level, centers, min_density);
}

}  // namespace baire
