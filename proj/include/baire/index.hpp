#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "baire/codec.hpp"
#include "baire/metric.hpp"

namespace baire {

struct Record {
    std::string id;
    DigitCode code;
};

/// One cluster read off the tree: every record sharing `prefix`.
struct PrefixBin {
    DigitCode prefix;
    int level = 0;
    std::vector<std::string> members;  ///< insertion order
};

/// Singleton depth of a terminal is the shallowest level at which its bin
/// holds only itself. Records with an exact duplicate never become singletons
/// and are counted at the full precision.
struct TraversalStats {
    std::map<int, std::size_t> histogram;
    int min_depth = 0;
    int max_depth = 0;
    double mean_depth = 0.0;
    int balanced_depth = 0;  ///< floor(log2 n), the balanced binary reference
};

struct Neighbor {
    std::string id;
    BaireProximity proximity;
};

/// Instrumentation for a single query. A probe is one bin lookup.
struct QueryTrace {
    std::size_t probes = 0;
};

/// The m-adic prefix tree, stored as one prefix -> bin map per level.
///
/// Level l holds the bins keyed by the first l digits of each code. Records
/// keep their insertion order, which fixes nearest-neighbor tie-breaking and
/// the order of bin members. Queries never mutate, so a built index may be
/// shared between reader threads.
class MadicIndex {
public:
    MadicIndex(int base, int precision);

    /// One scan over `records`; scan_count() equals records.size() afterwards.
    static MadicIndex build(std::span<const Record> records, int base, int precision);

    /// Adds one terminal, touching exactly one bin per level.
    void insert(std::string id, const DigitCode& code);

    int base() const noexcept { return base_; }
    int precision() const noexcept { return precision_; }
    std::size_t size() const noexcept { return ids_.size(); }
    bool empty() const noexcept { return ids_.empty(); }

    /// Records read by build() or load().
    std::size_t scan_count() const noexcept { return scan_count_; }

    bool contains(std::string_view id) const;
    DigitCode code(std::string_view id) const;
    std::span<const std::string> ids() const noexcept { return ids_; }

    /// Deepest level at which both terminals share a bin. At most
    /// 2 * precision probes.
    BaireProximity um_distance(std::string_view a, std::string_view b, QueryTrace* trace = nullptr) const;

    /// Walks up from the terminal's deepest bin to the first bin with another
    /// member and returns that bin's first other member. At most
    /// precision + 1 probes, independent of size().
    Neighbor nearest_neighbor(std::string_view id, QueryTrace* trace = nullptr) const;

    /// Descends along the query's prefix to the deepest non-empty bin and
    /// returns its first member.
    Neighbor nearest_neighbor(const DigitCode& query, QueryTrace* trace = nullptr) const;

    /// Non-empty bins at `level`, ascending by prefix.
    std::vector<PrefixBin> bins_at_level(int level) const;
    std::size_t bin_count(int level) const;

    TraversalStats depth_stats() const;

    /// The same records re-encoded at a lower precision, rebuilt in one scan.
    MadicIndex truncated(int new_precision) const;

    /// Bin-for-bin equality with member sets compared as sets.
    bool same_bins(const MadicIndex& other) const;

    void save(std::ostream& out) const;
    void save(const std::filesystem::path& path) const;
    static MadicIndex load(std::istream& in);
    static MadicIndex load(const std::filesystem::path& path);

private:
    using Bin = std::vector<std::uint32_t>;
    using LevelMap = std::unordered_map<std::uint64_t, Bin>;

    std::uint32_t ordinal(std::string_view id) const;
    std::uint64_t prefix_key(std::uint64_t key, int level) const { return key / divisor_[static_cast<std::size_t>(level)]; }
    const Bin* find_bin(int level, std::uint64_t prefix, QueryTrace* trace) const;
    void check_level(int level) const;
    void add(std::string id, std::uint64_t key);

    int base_;
    int precision_;
    std::size_t scan_count_ = 0;
    std::vector<std::uint64_t> divisor_;  ///< base^(precision - level), by level
    std::vector<std::string> ids_;
    std::vector<std::uint64_t> keys_;  ///< full code as a base-B integer
    std::unordered_map<std::string, std::uint32_t> ordinals_;
    std::vector<LevelMap> levels_;  ///< levels_[l - 1] holds level l
};

}  // namespace baire
