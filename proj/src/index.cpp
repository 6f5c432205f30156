#include "baire/index.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>
#include <set>
#include <sstream>

#include "baire/errors.hpp"

namespace baire {

namespace {

constexpr std::string_view kMagic = "MADIC1";
constexpr std::string_view kMagicFamily = "MADIC";

void check_id(std::string_view id) {
    if (id.empty()) throw DomainError("record id must be non-empty");
    if (id.find_first_of("\t\r\n") != std::string_view::npos) {
        throw DomainError("record id must not contain tabs or line breaks");
    }
}

std::uint32_t crc32_of(std::string_view bytes) {
    uLong crc = crc32(0L, Z_NULL, 0);
    crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size()));
    return static_cast<std::uint32_t>(crc);
}

std::string hex32(std::uint32_t v) {
    char buf[9];
    std::snprintf(buf, sizeof buf, "%08x", v);
    return buf;
}

}  // namespace

MadicIndex::MadicIndex(int base, int precision) : base_(base), precision_(precision) {
    if (base < kMinBase || base > kMaxBase) throw DomainError("base must lie in [2, 36]");
    if (precision < 1 || precision > max_precision(base)) {
        throw DomainError("precision must lie in [1, " + std::to_string(max_precision(base)) + "]");
    }
    divisor_.resize(static_cast<std::size_t>(precision_) + 1);
    for (int l = 0; l <= precision_; ++l) {
        divisor_[static_cast<std::size_t>(l)] = int_pow(base_, precision_ - l);
    }
    levels_.resize(static_cast<std::size_t>(precision_));
}

MadicIndex MadicIndex::build(std::span<const Record> records, int base, int precision) {
    MadicIndex index(base, precision);
    index.ids_.reserve(records.size());
    index.keys_.reserve(records.size());
    index.ordinals_.reserve(records.size());
    for (int l = 1; l <= precision; ++l) {
        const auto cells = static_cast<double>(index.divisor_[0]) / static_cast<double>(index.divisor_[l]);
        index.levels_[static_cast<std::size_t>(l - 1)].reserve(
            static_cast<std::size_t>(std::min(cells, static_cast<double>(records.size()))));
    }
    for (const auto& r : records) {
        index.insert(r.id, r.code);
        ++index.scan_count_;
    }
    return index;
}

void MadicIndex::insert(std::string id, const DigitCode& code) {
    check_id(id);
    if (code.base() != base_ || code.precision() != precision_) {
        throw MismatchError("code (base " + std::to_string(code.base()) + ", precision " +
                            std::to_string(code.precision()) + ") does not match index (base " +
                            std::to_string(base_) + ", precision " + std::to_string(precision_) + ")");
    }
    add(std::move(id), code.prefix_value(precision_));
}

void MadicIndex::add(std::string id, std::uint64_t key) {
    if (ids_.size() >= std::numeric_limits<std::uint32_t>::max()) {
        throw DomainError("index is full");
    }
    const auto ord = static_cast<std::uint32_t>(ids_.size());
    if (!ordinals_.emplace(id, ord).second) {
        throw DuplicateIdError("duplicate record id '" + id + "'");
    }
    ids_.push_back(std::move(id));
    keys_.push_back(key);
    for (int l = 1; l <= precision_; ++l) {
        levels_[static_cast<std::size_t>(l - 1)][prefix_key(key, l)].push_back(ord);
    }
}

bool MadicIndex::contains(std::string_view id) const { return ordinals_.count(std::string(id)) != 0; }

std::uint32_t MadicIndex::ordinal(std::string_view id) const {
    auto it = ordinals_.find(std::string(id));
    if (it == ordinals_.end()) throw UnknownIdError("unknown record id '" + std::string(id) + "'");
    return it->second;
}

DigitCode MadicIndex::code(std::string_view id) const {
    return DigitCode::from_integer(keys_[ordinal(id)], base_, precision_);
}

const MadicIndex::Bin* MadicIndex::find_bin(int level, std::uint64_t prefix, QueryTrace* trace) const {
    if (trace) ++trace->probes;
    const auto& map = levels_[static_cast<std::size_t>(level - 1)];
    auto it = map.find(prefix);
    return it == map.end() ? nullptr : &it->second;
}

void MadicIndex::check_level(int level) const {
    if (level < 1 || level > precision_) {
        throw LevelError("level " + std::to_string(level) + " outside [1, " + std::to_string(precision_) + "]");
    }
}

BaireProximity MadicIndex::um_distance(std::string_view a, std::string_view b, QueryTrace* trace) const {
    const auto ka = keys_[ordinal(a)];
    const auto kb = keys_[ordinal(b)];
    int shared = 0;
    for (int l = 1; l <= precision_; ++l) {
        const Bin* ba = find_bin(l, prefix_key(ka, l), trace);
        const Bin* bb = find_bin(l, prefix_key(kb, l), trace);
        if (ba != bb) break;
        shared = l;
    }
    return {shared, base_, precision_};
}

Neighbor MadicIndex::nearest_neighbor(std::string_view id, QueryTrace* trace) const {
    const auto self = ordinal(id);
    if (ids_.size() < 2) throw NoNeighborError("index holds a single record; '" + std::string(id) + "' has no neighbor");
    const auto key = keys_[self];
    for (int l = precision_; l >= 1; --l) {
        const Bin* bin = find_bin(l, prefix_key(key, l), trace);
        if (bin->size() >= 2) {
            const auto other = (*bin)[0] != self ? (*bin)[0] : (*bin)[1];
            return {ids_[other], {l, base_, precision_}};
        }
    }
    // Root: every record shares the empty prefix.
    if (trace) ++trace->probes;
    return {ids_[self != 0 ? 0 : 1], {0, base_, precision_}};
}

Neighbor MadicIndex::nearest_neighbor(const DigitCode& query, QueryTrace* trace) const {
    if (ids_.empty()) throw EmptyIndexError("nearest neighbor query on an empty index");
    if (query.base() != base_ || query.precision() != precision_) {
        throw MismatchError("query code does not match index base/precision");
    }
    const auto key = query.prefix_value(precision_);
    const Bin* best = nullptr;
    int depth = 0;
    for (int l = 1; l <= precision_; ++l) {
        const Bin* bin = find_bin(l, prefix_key(key, l), trace);
        if (!bin) break;
        best = bin;
        depth = l;
    }
    if (!best) {
        if (trace) ++trace->probes;
        return {ids_.front(), {0, base_, precision_}};
    }
    return {ids_[best->front()], {depth, base_, precision_}};
}

std::vector<PrefixBin> MadicIndex::bins_at_level(int level) const {
    check_level(level);
    const auto& map = levels_[static_cast<std::size_t>(level - 1)];
    std::vector<std::uint64_t> prefixes;
    prefixes.reserve(map.size());
    for (const auto& [prefix, bin] : map) prefixes.push_back(prefix);
    std::sort(prefixes.begin(), prefixes.end());

    std::vector<PrefixBin> out;
    out.reserve(prefixes.size());
    for (auto prefix : prefixes) {
        PrefixBin pb{DigitCode::from_integer(prefix, base_, level), level, {}};
        const auto& bin = map.at(prefix);
        pb.members.reserve(bin.size());
        for (auto ord : bin) pb.members.push_back(ids_[ord]);
        out.push_back(std::move(pb));
    }
    return out;
}

std::size_t MadicIndex::bin_count(int level) const {
    check_level(level);
    return levels_[static_cast<std::size_t>(level - 1)].size();
}

TraversalStats MadicIndex::depth_stats() const {
    if (ids_.empty()) throw EmptyIndexError("depth statistics of an empty index");
    TraversalStats stats;
    stats.min_depth = precision_;
    std::size_t total = 0;
    for (auto key : keys_) {
        int depth = precision_;
        for (int l = 1; l <= precision_; ++l) {
            if (levels_[static_cast<std::size_t>(l - 1)].at(prefix_key(key, l)).size() == 1) {
                depth = l;
                break;
            }
        }
        ++stats.histogram[depth];
        stats.min_depth = std::min(stats.min_depth, depth);
        stats.max_depth = std::max(stats.max_depth, depth);
        total += static_cast<std::size_t>(depth);
    }
    stats.mean_depth = static_cast<double>(total) / static_cast<double>(ids_.size());
    stats.balanced_depth = static_cast<int>(std::floor(std::log2(static_cast<double>(ids_.size()))));
    return stats;
}

MadicIndex MadicIndex::truncated(int new_precision) const {
    if (new_precision < 1 || new_precision > precision_) {
        throw DomainError("cannot truncate a precision-" + std::to_string(precision_) + " index to " +
                          std::to_string(new_precision) + " digits");
    }
    std::vector<Record> records;
    records.reserve(ids_.size());
    for (std::size_t i = 0; i < ids_.size(); ++i) {
        records.push_back({ids_[i], truncate(DigitCode::from_integer(keys_[i], base_, precision_), new_precision)});
    }
    return build(records, base_, new_precision);
}

bool MadicIndex::same_bins(const MadicIndex& other) const {
    if (base_ != other.base_ || precision_ != other.precision_ || size() != other.size()) return false;
    for (int l = 1; l <= precision_; ++l) {
        const auto& mine = levels_[static_cast<std::size_t>(l - 1)];
        const auto& theirs = other.levels_[static_cast<std::size_t>(l - 1)];
        if (mine.size() != theirs.size()) return false;
        for (const auto& [prefix, bin] : mine) {
            auto it = theirs.find(prefix);
            if (it == theirs.end() || it->second.size() != bin.size()) return false;
            std::set<std::string_view> a;
            std::set<std::string_view> b;
            for (auto o : bin) a.insert(ids_[o]);
            for (auto o : it->second) b.insert(other.ids_[o]);
            if (a != b) return false;
        }
    }
    return true;
}

void MadicIndex::save(std::ostream& out) const {
    std::string body;
    body.reserve(32 + ids_.size() * (static_cast<std::size_t>(precision_) + 12));
    body += kMagic;
    body += ' ' + std::to_string(base_) + ' ' + std::to_string(precision_) + ' ' + std::to_string(ids_.size()) + '\n';
    for (std::size_t i = 0; i < ids_.size(); ++i) {
        body += ids_[i];
        body += '\t';
        body += DigitCode::from_integer(keys_[i], base_, precision_).to_string();
        body += '\n';
    }
    out << body << "CRC " << hex32(crc32_of(body)) << '\n';
    if (!out) throw Error("failed writing index");
}

void MadicIndex::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    save(out);
}

MadicIndex MadicIndex::load(std::istream& in) {
    const std::string data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};

    const auto header_end = data.find('\n');
    const std::string_view header = std::string_view(data).substr(0, header_end);
    const auto magic = header.substr(0, header.find(' '));
    if (magic != kMagic) {
        if (magic.substr(0, kMagicFamily.size()) == kMagicFamily) {
            throw FormatVersionError("unsupported index format '" + std::string(magic) + "'");
        }
        throw CorruptionError("not an index file");
    }
    if (header_end == std::string::npos) throw CorruptionError("index file truncated after header");

    // The checksum line is the last line; everything before it is covered.
    if (data.empty() || data.back() != '\n') throw CorruptionError("index file truncated");
    const auto crc_start = data.rfind('\n', data.size() - 2);
    if (crc_start == std::string::npos || crc_start < header_end) throw CorruptionError("index file missing checksum");
    const std::string_view body = std::string_view(data).substr(0, crc_start + 1);
    const std::string_view crc_line = std::string_view(data).substr(crc_start + 1, data.size() - crc_start - 2);
    if (crc_line.substr(0, 4) != "CRC " || crc_line.substr(4) != hex32(crc32_of(body))) {
        throw CorruptionError("index checksum mismatch");
    }

    int base = 0;
    int precision = 0;
    std::size_t count = 0;
    {
        std::istringstream hs{std::string(header.substr(kMagic.size()))};
        if (!(hs >> base >> precision >> count)) throw CorruptionError("malformed index header");
    }
    MadicIndex index = [&] {
        try {
            return MadicIndex(base, precision);
        } catch (const DomainError& e) {
            throw CorruptionError(std::string("invalid index header: ") + e.what());
        }
    }();
    index.ids_.reserve(count);
    index.keys_.reserve(count);

    std::size_t pos = header_end + 1;
    while (pos < body.size()) {
        const auto eol = body.find('\n', pos);
        const auto line = body.substr(pos, eol - pos);
        pos = eol + 1;
        const auto tab = line.find('\t');
        if (tab == std::string_view::npos) throw CorruptionError("malformed index record");
        try {
            index.insert(std::string(line.substr(0, tab)), DigitCode::from_string(line.substr(tab + 1), base));
        } catch (const CorruptionError&) {
            throw;
        } catch (const Error& e) {
            throw CorruptionError(std::string("bad index record: ") + e.what());
        }
        ++index.scan_count_;
    }
    if (index.size() != count) throw CorruptionError("index record count does not match header");
    return index;
}

MadicIndex MadicIndex::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    return load(in);
}

}  // namespace baire
