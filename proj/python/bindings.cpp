#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "baire/codec.hpp"
#include "baire/errors.hpp"
#include "baire/eval.hpp"
#include "baire/gridcluster.hpp"
#include "baire/index.hpp"
#include "baire/metric.hpp"
#include "baire/project.hpp"

namespace py = pybind11;
using namespace baire;

namespace {

Dataset to_dataset(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 2) throw py::value_error("expected a 2-d array of shape (n, d)");
    const auto rows = static_cast<std::size_t>(a.shape(0));
    const auto cols = static_cast<std::size_t>(a.shape(1));
    return Dataset(rows, cols, std::vector<double>(a.data(), a.data() + rows * cols));
}

std::vector<Record> to_records(const std::vector<std::pair<std::string, DigitCode>>& items) {
    std::vector<Record> records;
    records.reserve(items.size());
    for (const auto& [id, code] : items) records.push_back({id, code});
    return records;
}

py::dict neighbor_dict(const Neighbor& nb, const QueryTrace& trace) {
    py::dict d;
    d["id"] = nb.id;
    d["proximity"] = nb.proximity;
    d["probes"] = trace.probes;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Baire (m-adic) hierarchical clustering and ultrametric search";

    auto base_error = py::register_exception<Error>(m, "BaireError");
    py::register_exception<DomainError>(m, "DomainError", base_error);
    py::register_exception<RangeError>(m, "RangeError", base_error);
    py::register_exception<LevelError>(m, "LevelError", base_error);
    py::register_exception<MismatchError>(m, "MismatchError", base_error);
    py::register_exception<DuplicateIdError>(m, "DuplicateIdError", base_error);
    py::register_exception<UnknownIdError>(m, "UnknownIdError", base_error);
    py::register_exception<EmptyIndexError>(m, "EmptyIndexError", base_error);
    py::register_exception<NoNeighborError>(m, "NoNeighborError", base_error);
    py::register_exception<FormatVersionError>(m, "FormatVersionError", base_error);
    py::register_exception<CorruptionError>(m, "CorruptionError", base_error);

    // codec
    py::class_<DigitCode>(m, "DigitCode")
        .def(py::init<int, std::vector<std::uint8_t>>(), py::arg("base"), py::arg("digits"))
        .def_static("from_string", &DigitCode::from_string, py::arg("text"), py::arg("base"))
        .def_property_readonly("base", &DigitCode::base)
        .def_property_readonly("precision", &DigitCode::precision)
        .def_property_readonly("digits",
                               [](const DigitCode& c) { return std::vector<int>(c.digits().begin(), c.digits().end()); })
        .def("prefix_value", &DigitCode::prefix_value, py::arg("level"))
        .def("__str__", &DigitCode::to_string)
        .def("__repr__", [](const DigitCode& c) {
            return "DigitCode(base=" + std::to_string(c.base()) + ", '" + c.to_string() + "')";
        })
        .def("__len__", &DigitCode::precision)
        .def(py::self == py::self)
        .def("__hash__", [](const DigitCode& c) { return py::hash(py::make_tuple(c.base(), c.to_string())); });

    py::class_<NormalizationBounds>(m, "NormalizationBounds")
        .def(py::init<double, double>(), py::arg("lo"), py::arg("hi"))
        .def_static("fit", [](const std::vector<double>& v) { return NormalizationBounds::fit(v); })
        .def_readonly("lo", &NormalizationBounds::lo)
        .def_readonly("hi", &NormalizationBounds::hi)
        .def_property_readonly("degenerate", &NormalizationBounds::degenerate);

    m.def("max_precision", &max_precision, py::arg("base"));
    m.def("encode", &encode, py::arg("value"), py::arg("base") = kDecimalBase, py::arg("precision") = 4);
    m.def("decode", &decode, py::arg("code"));
    m.def(
        "normalize",
        [](const std::vector<double>& v, const NormalizationBounds& b) { return normalize(std::span<const double>(v), b); },
        py::arg("values"), py::arg("bounds"));
    m.def("truncate", [](const DigitCode& c, int p) { return baire::truncate(c, p); }, py::arg("code"), py::arg("new_precision"));

    // metric
    py::class_<BaireProximity>(m, "BaireProximity")
        .def_readonly("lcp", &BaireProximity::lcp)
        .def_readonly("base", &BaireProximity::base)
        .def_readonly("cap", &BaireProximity::cap)
        .def_property_readonly("value", &BaireProximity::value)
        .def(py::self == py::self)
        .def("__repr__", [](const BaireProximity& p) {
            return "BaireProximity(lcp=" + std::to_string(p.lcp) + ", value=" + py::repr(py::float_(p.value())).cast<std::string>() + ")";
        });
    m.def("lcp", &lcp, py::arg("a"), py::arg("b"));
    m.def("baire_distance", &baire_distance, py::arg("a"), py::arg("b"));
    m.def("check_ultrametric_triplet", &check_ultrametric_triplet, py::arg("a"), py::arg("b"), py::arg("c"));
    m.def("check_isosceles", &check_isosceles, py::arg("a"), py::arg("b"), py::arg("c"));

    // index
    py::class_<PrefixBin>(m, "PrefixBin")
        .def_readonly("prefix", &PrefixBin::prefix)
        .def_readonly("level", &PrefixBin::level)
        .def_readonly("members", &PrefixBin::members);

    py::class_<TraversalStats>(m, "TraversalStats")
        .def_readonly("histogram", &TraversalStats::histogram)
        .def_readonly("min_depth", &TraversalStats::min_depth)
        .def_readonly("max_depth", &TraversalStats::max_depth)
        .def_readonly("mean_depth", &TraversalStats::mean_depth)
        .def_readonly("balanced_depth", &TraversalStats::balanced_depth);

    py::class_<MadicIndex>(m, "MadicIndex")
        .def(py::init<int, int>(), py::arg("base"), py::arg("precision"))
        .def_static(
            "build",
            [](const std::vector<std::pair<std::string, DigitCode>>& items, int base, int precision) {
                return MadicIndex::build(to_records(items), base, precision);
            },
            py::arg("records"), py::arg("base"), py::arg("precision"))
        .def("insert", &MadicIndex::insert, py::arg("id"), py::arg("code"))
        .def_property_readonly("base", &MadicIndex::base)
        .def_property_readonly("precision", &MadicIndex::precision)
        .def_property_readonly("scan_count", &MadicIndex::scan_count)
        .def_property_readonly("ids",
                               [](const MadicIndex& ix) { return std::vector<std::string>(ix.ids().begin(), ix.ids().end()); })
        .def("__len__", &MadicIndex::size)
        .def("__contains__", &MadicIndex::contains)
        .def("code", &MadicIndex::code, py::arg("id"))
        .def(
            "um_distance", [](const MadicIndex& ix, const std::string& a, const std::string& b) { return ix.um_distance(a, b); },
            py::arg("a"), py::arg("b"))
        .def(
            "nearest_neighbor",
            [](const MadicIndex& ix, const std::string& id) {
                QueryTrace trace;
                const auto nb = ix.nearest_neighbor(id, &trace);
                return neighbor_dict(nb, trace);
            },
            py::arg("id"))
        .def(
            "nearest_neighbor",
            [](const MadicIndex& ix, const DigitCode& code) {
                QueryTrace trace;
                const auto nb = ix.nearest_neighbor(code, &trace);
                return neighbor_dict(nb, trace);
            },
            py::arg("code"))
        .def("bins_at_level", &MadicIndex::bins_at_level, py::arg("level"))
        .def("bin_count", &MadicIndex::bin_count, py::arg("level"))
        .def("depth_stats", &MadicIndex::depth_stats)
        .def("truncated", &MadicIndex::truncated, py::arg("new_precision"))
        .def("same_bins", &MadicIndex::same_bins, py::arg("other"))
        .def("save", py::overload_cast<const std::filesystem::path&>(&MadicIndex::save, py::const_), py::arg("path"))
        .def_static("load", py::overload_cast<const std::filesystem::path&>(&MadicIndex::load), py::arg("path"));

    // project
    py::class_<ProjectionSpec>(m, "ProjectionSpec")
        .def_readonly("dimension", &ProjectionSpec::dimension)
        .def_readonly("seed", &ProjectionSpec::seed)
        .def_readonly("axes", &ProjectionSpec::axes)
        .def_readonly("bounds", &ProjectionSpec::bounds)
        .def_property_readonly("axis_count", &ProjectionSpec::axis_count)
        .def_static("identity", &ProjectionSpec::identity)
        .def("save", py::overload_cast<const std::filesystem::path&>(&ProjectionSpec::save, py::const_), py::arg("path"))
        .def_static("load", py::overload_cast<const std::filesystem::path&>(&ProjectionSpec::load), py::arg("path"));
    m.def("make_spec", &make_spec, py::arg("dimension"), py::arg("axis_count") = 1, py::arg("seed") = 1);
    m.def(
        "project", [](const std::vector<double>& r, const ProjectionSpec& s) { return project(r, s); }, py::arg("record"),
        py::arg("spec"));
    m.def(
        "fit_bounds", [](const ProjectionSpec& s, const std::vector<double>& v) { return fit_bounds(s, v); },
        py::arg("spec"), py::arg("projected"));
    m.def(
        "encode_record",
        [](const std::vector<double>& r, const ProjectionSpec& s, int base, int precision) {
            bool clamped = false;
            auto code = encode_record(r, s, base, precision, clamped);
            return py::make_tuple(code, clamped);
        },
        py::arg("record"), py::arg("spec"), py::arg("base") = kDecimalBase, py::arg("precision") = 4);

    // gridcluster
    py::class_<BinStat>(m, "BinStat")
        .def(py::init([](const DigitCode& prefix, int level, std::size_t density) { return BinStat{prefix, level, density}; }),
             py::arg("prefix"), py::arg("level"), py::arg("density"))
        .def_readonly("prefix", &BinStat::prefix)
        .def_readonly("level", &BinStat::level)
        .def_readonly("density", &BinStat::density);
    py::class_<ClusterLabeling>(m, "ClusterLabeling")
        .def_readonly("level", &ClusterLabeling::level)
        .def_readonly("ids", &ClusterLabeling::ids)
        .def_readonly("labels", &ClusterLabeling::labels)
        .def_readonly("cluster_count", &ClusterLabeling::cluster_count)
        .def_property_readonly("noise_count", &ClusterLabeling::noise_count)
        .def("label_of", &ClusterLabeling::label_of, py::arg("id"));
    m.attr("NOISE") = kNoise;
    m.def("cell_densities", &cell_densities, py::arg("index"), py::arg("level"));
    m.def("sort_by_density", &sort_by_density, py::arg("stats"));
    m.def(
        "identify_centers", [](const std::vector<BinStat>& s, std::size_t t) { return identify_centers(s, t); },
        py::arg("sorted_stats"), py::arg("min_density"));
    m.def(
        "merge_neighbors",
        [](const MadicIndex& ix, int level, const std::vector<BinStat>& centers, std::size_t t) {
            return merge_neighbors(ix, level, centers, t);
        },
        py::arg("index"), py::arg("level"), py::arg("centers"), py::arg("min_density"));
    m.def("grid_cluster", &grid_cluster, py::arg("index"), py::arg("level"), py::arg("min_density"));

    // eval
    py::class_<KMeansResult>(m, "KMeansResult")
        .def_readonly("labels", &KMeansResult::labels)
        .def_readonly("inertia_history", &KMeansResult::inertia_history)
        .def_readonly("iterations", &KMeansResult::iterations)
        .def_readonly("converged", &KMeansResult::converged)
        .def_property_readonly("inertia", &KMeansResult::inertia)
        .def_property_readonly("centroids", [](const KMeansResult& r) {
            py::array_t<double> a({r.centroids.rows(), r.centroids.cols()});
            std::copy(r.centroids.values().begin(), r.centroids.values().end(), a.mutable_data());
            return a;
        });
    m.def(
        "kmeans",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& data, std::size_t k, std::uint64_t seed,
           std::size_t max_iters) { return kmeans(to_dataset(data), k, seed, max_iters); },
        py::arg("data"), py::arg("k"), py::arg("seed") = 1, py::arg("max_iters") = 100);

    py::class_<PartitionScore>(m, "PartitionScore")
        .def_readonly("rand_index", &PartitionScore::rand_index)
        .def_readonly("agree_same", &PartitionScore::agree_same)
        .def_readonly("agree_diff", &PartitionScore::agree_diff)
        .def_readonly("disagree", &PartitionScore::disagree)
        .def_property_readonly("total_pairs", &PartitionScore::total_pairs);
    m.def(
        "rand_index", [](const std::vector<int>& a, const std::vector<int>& b) { return rand_index(a, b); }, py::arg("a"),
        py::arg("b"));
    m.def(
        "rand_index",
        [](const std::map<std::string, int>& a, const std::map<std::string, int>& b) { return rand_index(a, b); },
        py::arg("a"), py::arg("b"));

    py::class_<UltrametricityReport>(m, "UltrametricityReport")
        .def_readonly("alpha", &UltrametricityReport::alpha)
        .def_readonly("triplets_sampled", &UltrametricityReport::triplets_sampled)
        .def_readonly("tolerance", &UltrametricityReport::tolerance);
    m.def(
        "ultrametricity_alpha",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& data, std::size_t sample_size,
           double tolerance, std::uint64_t seed) {
            return ultrametricity_alpha(to_dataset(data), sample_size, tolerance, seed);
        },
        py::arg("data"), py::arg("sample_size"), py::arg("tolerance"), py::arg("seed") = 1);
    m.def(
        "ultrametricity_alpha",
        [](const std::vector<DigitCode>& codes, std::size_t sample_size, double tolerance, std::uint64_t seed) {
            return ultrametricity_alpha(std::span<const DigitCode>(codes), sample_size, tolerance, seed);
        },
        py::arg("codes"), py::arg("sample_size"), py::arg("tolerance"), py::arg("seed") = 1);

    m.def(
        "scaling_benchmark",
        [](const std::vector<std::size_t>& sizes, int base, int precision, std::uint64_t seed) {
            py::list rows;
            for (const auto& r : scaling_benchmark(sizes, base, precision, seed)) {
                rows.append(py::dict(py::arg("n") = r.n, py::arg("build_seconds") = r.build_seconds,
                                     py::arg("reads") = r.reads));
            }
            return rows;
        },
        py::arg("sizes"), py::arg("base") = kDecimalBase, py::arg("precision") = 6, py::arg("seed") = 1);
}
