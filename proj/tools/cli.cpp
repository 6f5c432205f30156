#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "baire/errors.hpp"
#include "baire/gridcluster.hpp"
#include "baire/index.hpp"
#include "baire/project.hpp"

namespace baire::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string> split_commas(std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.emplace_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

std::optional<double> parse_number(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

std::optional<std::size_t> parse_index(std::string_view s) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

std::size_t resolve_column(const std::string& ref, const std::vector<std::string>& header, std::size_t width) {
    if (!header.empty()) {
        auto it = std::find(header.begin(), header.end(), ref);
        if (it != header.end()) return static_cast<std::size_t>(it - header.begin());
    }
    if (auto i = parse_index(ref); i && *i < width) return *i;
    throw UsageError("unknown column '" + ref + "'");
}

fs::path default_spec_path(const fs::path& index_path) { return fs::path(index_path.string() + ".proj"); }

json depth_json(const TraversalStats& s) {
    json hist = json::object();
    for (const auto& [level, count] : s.histogram) hist[std::to_string(level)] = count;
    return {{"histogram", hist},
            {"min_depth", s.min_depth},
            {"max_depth", s.max_depth},
            {"mean_depth", s.mean_depth},
            {"balanced_depth", s.balanced_depth}};
}

json bins_per_level(const MadicIndex& index) {
    json counts = json::array();
    for (int l = 1; l <= index.precision(); ++l) counts.push_back(index.bin_count(l));
    return counts;
}

json proximity_json(const BaireProximity& p) { return {{"distance", p.value()}, {"lcp", p.lcp}}; }

std::vector<double> parse_vector(const std::string& text) {
    std::vector<double> v;
    for (const auto& cell : split_commas(text)) {
        auto x = parse_number(cell);
        if (!x || !std::isfinite(*x)) throw UsageError("malformed value vector '" + text + "'");
        v.push_back(*x);
    }
    return v;
}

struct Encoded {
    ProjectionSpec spec;
    std::vector<Record> records;
};

Encoded encode_table(const CsvTable& table, const RunConfig& config) {
    const auto d = table.values.cols();
    ProjectionSpec spec = d == 1 ? ProjectionSpec::identity() : make_spec(d, config.axis_count, config.seed);
    std::vector<double> projected(table.values.rows());
    for (std::size_t i = 0; i < projected.size(); ++i) projected[i] = project(table.values.row(i), spec);
    spec = fit_bounds(std::move(spec), projected);

    Encoded out{std::move(spec), {}};
    out.records.reserve(projected.size());
    for (std::size_t i = 0; i < projected.size(); ++i) {
        out.records.push_back(
            {table.ids[i], encode(normalize(projected[i], *out.spec.bounds), config.base, config.precision)});
    }
    return out;
}

int cmd_build(const RunConfig& config, std::ostream& out) {
    const auto table = read_csv(config.input, config.id_column, config.value_columns);
    auto [spec, records] = encode_table(table, config);
    const auto index = MadicIndex::build(records, config.base, config.precision);
    const auto spec_path = config.spec_path.empty() ? default_spec_path(config.index_path) : config.spec_path;
    index.save(config.index_path);
    spec.save(spec_path);

    json j{{"count", index.size()},
           {"base", index.base()},
           {"precision", index.precision()},
           {"dimension", spec.dimension},
           {"projected", spec.dimension > 1},
           {"reads", index.scan_count()},
           {"depth_stats", depth_json(index.depth_stats())},
           {"bins_per_level", bins_per_level(index)},
           {"index", config.index_path.string()},
           {"spec", spec_path.string()}};
    out << j.dump(2) << '\n';
    return kOk;
}

ClusterLabeling cluster_index(const MadicIndex& index, int level, std::size_t min_density) {
    if (level < 1 || level > index.precision()) {
        throw UsageError("--level must lie in [1, " + std::to_string(index.precision()) + "]");
    }
    if (min_density < 1) throw UsageError("--min-density must be at least 1");
    return grid_cluster(index, level, min_density);
}

void write_labeling(const ClusterLabeling& labeling, std::size_t min_density, const fs::path& json_path,
                    const fs::path& tsv_path) {
    json labels = json::array();
    std::ofstream tsv(tsv_path, std::ios::binary);
    if (!tsv) throw DataError("cannot open '" + tsv_path.string() + "' for writing");
    for (std::size_t i = 0; i < labeling.ids.size(); ++i) {
        const int l = labeling.labels[i];
        labels.push_back({{"id", labeling.ids[i]}, {"cluster", l == kNoise ? json("noise") : json(l)}});
        tsv << labeling.ids[i] << '\t' << (l == kNoise ? std::string("noise") : std::to_string(l)) << '\n';
    }
    json j{{"level", labeling.level},
           {"min_density", min_density},
           {"cluster_count", labeling.cluster_count},
           {"noise_count", labeling.noise_count()},
           {"labels", labels}};
    std::ofstream js(json_path, std::ios::binary);
    if (!js) throw DataError("cannot open '" + json_path.string() + "' for writing");
    js << j.dump(2) << '\n';
}

}  // namespace

CsvTable read_csv(const fs::path& path, const std::optional<std::string>& id_column,
                  const std::vector<std::string>& value_columns) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read '" + path.string() + "'");

    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        rows.push_back(split_commas(line));
    }
    if (rows.empty()) throw DataError("no records");

    const auto width = rows.front().size();
    std::vector<std::string> header;
    const bool has_header = std::none_of(rows.front().begin(), rows.front().end(),
                                         [](const std::string& c) { return parse_number(c).has_value(); });
    std::size_t first = 0;
    if (has_header) {
        header = rows.front();
        first = 1;
    }
    if (rows.size() == first) throw DataError("no records");

    std::optional<std::size_t> id_col;
    if (id_column) id_col = resolve_column(*id_column, header, width);

    std::vector<std::size_t> cols;
    if (value_columns.empty()) {
        for (std::size_t c = 0; c < width; ++c)
            if (c != id_col) cols.push_back(c);
    } else {
        for (const auto& ref : value_columns) cols.push_back(resolve_column(ref, header, width));
    }
    if (cols.empty()) throw UsageError("no value columns selected");

    CsvTable table;
    for (auto c : cols) table.columns.push_back(has_header ? header[c] : std::to_string(c));
    const auto n = rows.size() - first;
    table.values = Dataset(n, cols.size());
    table.ids.reserve(n);
    for (std::size_t r = first; r < rows.size(); ++r) {
        const auto& row = rows[r];
        const auto line_no = std::to_string(r + 1);
        if (row.size() != width) {
            throw DataError("row " + line_no + " has " + std::to_string(row.size()) + " cells, expected " +
                            std::to_string(width));
        }
        table.ids.push_back(id_col ? row[*id_col] : std::to_string(r - first));
        for (std::size_t j = 0; j < cols.size(); ++j) {
            const auto& cell = row[cols[j]];
            const auto where = "row " + line_no + ", column " + table.columns[j];
            if (cell.empty()) throw DataError("empty cell at " + where);
            const auto v = parse_number(cell);
            if (!v) throw DataError("non-numeric cell '" + cell + "' at " + where);
            if (!std::isfinite(*v)) throw DataError("non-finite cell '" + cell + "' at " + where);
            table.values(r - first, j) = *v;
        }
    }
    return table;
}

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Baire (m-adic) hierarchical clustering and ultrametric search"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    RunConfig config;
    std::string id_column;
    auto add_ingest = [&](CLI::App* sub) {
        sub->add_option("-i,--input", config.input, "CSV input")->required();
        sub->add_option("--id-column", id_column, "Id column (header name or 0-based index)");
        sub->add_option("--columns", config.value_columns, "Value columns (default: all but the id column)")
            ->delimiter(',');
    };

    auto* build = app.add_subcommand("build", "Encode a CSV file and write an index and projection spec");
    add_ingest(build);
    build->add_option("--base", config.base, "Digit base")->capture_default_str();
    build->add_option("--precision", config.precision, "Digits per code")->capture_default_str();
    build->add_option("--seed", config.seed, "Projection seed")->capture_default_str();
    build->add_option("--axes", config.axis_count, "Projection axes")->capture_default_str();
    build->add_option("--index", config.index_path, "Index output")->capture_default_str();
    build->add_option("--spec", config.spec_path, "Projection spec output (default: <index>.proj)");

    fs::path index_path;
    fs::path spec_path;
    auto* query = app.add_subcommand("query", "Answer nearest-neighbor, distance, bin and statistics queries");
    query->add_option("--index", index_path, "Index file")->required();
    query->add_option("--spec", spec_path, "Projection spec (default: <index>.proj)");
    query->require_subcommand(1);

    std::vector<std::string> query_ids;
    std::string query_value;
    auto* nn = query->add_subcommand("nn", "Nearest neighbor of a record or of a raw value vector");
    auto* nn_id = nn->add_option("--id", query_ids, "Indexed record id");
    auto* nn_value = nn->add_option("--value", query_value, "Comma-separated raw values");
    nn_id->excludes(nn_value);
    auto* dist = query->add_subcommand("dist", "Ultrametric distance between two records");
    dist->add_option("--id", query_ids, "Record id (give twice)")->required();
    int level = 0;
    auto* bins = query->add_subcommand("bins", "Bins at a tree level");
    bins->add_option("--level", level, "Tree level")->required();
    auto* stats = query->add_subcommand("stats", "Depth statistics and bin counts");

    std::size_t min_density = 0;
    fs::path json_out;
    fs::path tsv_out;
    auto* cluster = app.add_subcommand("cluster", "Grid-based clustering over the bins of one level");
    cluster->add_option("--index", index_path, "Index file")->required();
    cluster->add_option("--level", level, "Tree level")->required();
    cluster->add_option("--min-density", min_density, "Minimum bin size of a cluster cell")->required();
    cluster->add_option("--json", json_out, "Labeling JSON output (default: <index>.clusters.json)");
    cluster->add_option("--tsv", tsv_out, "Labeling TSV output (default: <index>.clusters.tsv)");

    std::size_t k = 0;
    std::size_t max_iters = 100;
    auto* compare = app.add_subcommand("compare", "Rand index between grid clusters and k-means on the raw data");
    compare->add_option("--index", index_path, "Index file")->required();
    add_ingest(compare);
    compare->add_option("--level", level, "Tree level")->required();
    compare->add_option("--min-density", min_density, "Minimum bin size of a cluster cell")->required();
    compare->add_option("-k", k, "k-means cluster count")->required();
    compare->add_option("--seed", config.seed, "k-means seed")->capture_default_str();
    compare->add_option("--max-iters", max_iters, "k-means iteration cap")->capture_default_str();

    std::vector<std::size_t> sizes{1000, 10000, 100000};
    std::string format = "table";
    auto* bench = app.add_subcommand("bench", "Build-time scaling benchmark");
    bench->add_option("--sizes", sizes, "Record counts, ascending")->delimiter(',')->capture_default_str();
    bench->add_option("--base", config.base, "Digit base")->capture_default_str();
    bench->add_option("--precision", config.precision, "Digits per code")->capture_default_str();
    bench->add_option("--seed", config.seed, "Data seed")->capture_default_str();
    bench->add_option("--format", format, "table or json")->check(CLI::IsMember({"table", "json"}));

    int new_precision = 0;
    fs::path output;
    auto* trunc = app.add_subcommand("truncate", "Re-encode an index at a lower precision");
    trunc->add_option("--index", index_path, "Index file")->required();
    trunc->add_option("--precision", new_precision, "New precision")->required();
    trunc->add_option("-o,--output", output, "Output index")->required();

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsage;
    }
    if (!id_column.empty()) config.id_column = id_column;

    try {
        if (*build) {
            if (config.base < kMinBase || config.base > kMaxBase) throw UsageError("--base must lie in [2, 36]");
            if (config.precision < 1 || config.precision > max_precision(config.base)) {
                throw UsageError("--precision must lie in [1, " + std::to_string(max_precision(config.base)) + "]");
            }
            if (config.axis_count < 1) throw UsageError("--axes must be at least 1");
            return cmd_build(config, out);
        }

        if (*query) {
            const auto index = MadicIndex::load(index_path);
            json j;
            if (*nn) {
                QueryTrace trace;
                Neighbor hit;
                if (query_ids.size() > 1) throw UsageError("nn takes a single --id");
                if (!query_ids.empty()) {
                    hit = index.nearest_neighbor(query_ids.front(), &trace);
                    j["query"] = query_ids.front();
                } else if (!query_value.empty()) {
                    const auto spec = ProjectionSpec::load(spec_path.empty() ? default_spec_path(index_path) : spec_path);
                    const auto values = parse_vector(query_value);
                    if (values.size() != spec.dimension) {
                        throw UsageError("value vector has " + std::to_string(values.size()) +
                                         " components, index expects " + std::to_string(spec.dimension));
                    }
                    bool clamped = false;
                    const auto code = encode_record(values, spec, index.base(), index.precision(), clamped);
                    if (clamped) err << "warning: query value lies outside the fitted bounds; clamped\n";
                    hit = index.nearest_neighbor(code, &trace);
                    j["query_code"] = code.to_string();
                    j["clamped"] = clamped;
                } else {
                    throw UsageError("nn needs --id or --value");
                }
                j["neighbor"] = hit.id;
                j.update(proximity_json(hit.proximity));
                j["probes"] = trace.probes;
            } else if (*dist) {
                if (query_ids.size() != 2) throw UsageError("dist needs exactly two --id options");
                const auto p = index.um_distance(query_ids[0], query_ids[1]);
                j = {{"a", query_ids[0]}, {"b", query_ids[1]}};
                j.update(proximity_json(p));
            } else if (*bins) {
                if (level < 1 || level > index.precision()) {
                    throw UsageError("--level must lie in [1, " + std::to_string(index.precision()) + "]");
                }
                json arr = json::array();
                for (const auto& b : index.bins_at_level(level)) {
                    arr.push_back({{"prefix", b.prefix.to_string()}, {"members", b.members}});
                }
                j = {{"level", level}, {"bins", arr}};
            } else if (*stats) {
                j = depth_json(index.depth_stats());
                j["count"] = index.size();
                j["base"] = index.base();
                j["precision"] = index.precision();
                j["bins_per_level"] = bins_per_level(index);
            }
            out << j.dump(2) << '\n';
            return kOk;
        }

        if (*cluster) {
            const auto index = MadicIndex::load(index_path);
            const auto labeling = cluster_index(index, level, min_density);
            const auto jp = json_out.empty() ? fs::path(index_path.string() + ".clusters.json") : json_out;
            const auto tp = tsv_out.empty() ? fs::path(index_path.string() + ".clusters.tsv") : tsv_out;
            write_labeling(labeling, min_density, jp, tp);
            out << json{{"cluster_count", labeling.cluster_count},
                        {"noise_count", labeling.noise_count()},
                        {"json", jp.string()},
                        {"tsv", tp.string()}}
                       .dump(2)
                << '\n';
            return kOk;
        }

        if (*compare) {
            const auto index = MadicIndex::load(index_path);
            const auto table = read_csv(config.input, config.id_column, config.value_columns);
            if (k < 1 || k > table.values.rows()) {
                throw UsageError("-k must lie in [1, " + std::to_string(table.values.rows()) + "]");
            }
            const auto labeling = cluster_index(index, level, min_density);
            const auto km = kmeans(table.values, k, config.seed, max_iters);

            std::map<std::string, int> grid;
            std::map<std::string, int> lloyd;
            for (std::size_t i = 0; i < labeling.ids.size(); ++i) grid[labeling.ids[i]] = labeling.labels[i];
            for (std::size_t i = 0; i < table.ids.size(); ++i) lloyd[table.ids[i]] = km.labels[i];
            PartitionScore score;
            try {
                score = rand_index(grid, lloyd);
            } catch (const MismatchError&) {
                throw DataError("CSV ids do not match the index ids");
            }
            out << json{{"rand_index", score.rand_index},
                        {"agree_same", score.agree_same},
                        {"agree_diff", score.agree_diff},
                        {"disagree", score.disagree},
                        {"total_pairs", score.total_pairs()},
                        {"grid_clusters", labeling.cluster_count},
                        {"grid_noise", labeling.noise_count()},
                        {"kmeans_k", k},
                        {"kmeans_iterations", km.iterations},
                        {"kmeans_inertia", km.inertia()}}
                       .dump(2)
                << '\n';
            return kOk;
        }

        if (*bench) {
            if (!std::is_sorted(sizes.begin(), sizes.end())) throw UsageError("--sizes must be ascending");
            const auto rows = scaling_benchmark(sizes, config.base, config.precision, config.seed);
            if (format == "json") {
                json arr = json::array();
                for (const auto& r : rows) arr.push_back({{"n", r.n}, {"build_seconds", r.build_seconds}, {"reads", r.reads}});
                out << json{{"base", config.base}, {"precision", config.precision}, {"seed", config.seed}, {"rows", arr}}
                           .dump(2)
                    << '\n';
            } else {
                out << std::setw(12) << "n" << std::setw(16) << "build_seconds" << std::setw(12) << "reads" << '\n';
                for (const auto& r : rows) {
                    out << std::setw(12) << r.n << std::setw(16) << std::fixed << std::setprecision(6)
                        << r.build_seconds << std::setw(12) << r.reads << '\n';
                }
            }
            return kOk;
        }

        if (*trunc) {
            const auto index = MadicIndex::load(index_path);
            if (new_precision < 1 || new_precision > index.precision()) {
                throw UsageError("--precision must lie in [1, " + std::to_string(index.precision()) + "]");
            }
            const auto coarse = index.truncated(new_precision);
            coarse.save(output);
            out << json{{"count", coarse.size()},
                        {"precision", coarse.precision()},
                        {"bins_per_level", bins_per_level(coarse)},
                        {"index", output.string()}}
                       .dump(2)
                << '\n';
            return kOk;
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const LevelError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const DataError& e) {
        err << "error: " << e.what() << '\n';
        return kData;
    } catch (const baire::Error& e) {
        err << "error: " << e.what() << '\n';
        return kData;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternal;
    }
    return kInternal;
}

}  // namespace baire::cli
