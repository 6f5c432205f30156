#include "baire/project.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "baire/errors.hpp"

namespace baire {

namespace {

class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

private:
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

ProjectionSpec ProjectionSpec::identity() {
    ProjectionSpec spec;
    spec.dimension = 1;
    spec.axes = {{1.0}};
    return spec;
}

ProjectionSpec make_spec(std::size_t dimension, std::size_t axis_count, std::uint64_t seed) {
    if (dimension < 1) throw DomainError("projection dimension must be at least 1");
    if (axis_count < 1) throw DomainError("projection needs at least one axis");
    ProjectionSpec spec;
    spec.dimension = dimension;
    spec.seed = seed;
    NormalStream normals(seed);
    spec.axes.reserve(axis_count);
    while (spec.axes.size() < axis_count) {
        std::vector<double> axis(dimension);
        double sq = 0.0;
        for (auto& c : axis) {
            c = normals.next();
            sq += c * c;
        }
        // A zero draw cannot be normalized; take the next one.
        if (sq == 0.0) continue;
        const double norm = std::sqrt(sq);
        for (auto& c : axis) c /= norm;
        spec.axes.push_back(std::move(axis));
    }
    return spec;
}

double project(std::span<const double> record, const ProjectionSpec& spec) {
    if (record.size() != spec.dimension) {
        throw MismatchError("record has " + std::to_string(record.size()) + " components, projection expects " +
                            std::to_string(spec.dimension));
    }
    double total = 0.0;
    for (const auto& axis : spec.axes) {
        double dot = 0.0;
        for (std::size_t i = 0; i < axis.size(); ++i) dot += axis[i] * record[i];
        total += dot;
    }
    return total / static_cast<double>(spec.axes.size());
}

ProjectionSpec fit_bounds(ProjectionSpec spec, std::span<const double> projected) {
    spec.bounds = NormalizationBounds::fit(projected);
    return spec;
}

DigitCode encode_record(std::span<const double> record, const ProjectionSpec& spec, int base, int precision,
                        bool& clamped) {
    if (!spec.bounds) throw DomainError("projection bounds have not been fitted");
    const double unit = normalize_clamped(project(record, spec), *spec.bounds, clamped);
    return encode(unit, base, precision);
}

void ProjectionSpec::save(std::ostream& out) const {
    if (!bounds) throw DomainError("projection bounds have not been fitted");
    out << "PROJ1 " << dimension << ' ' << axes.size() << ' ' << seed << ' ' << fmt17(bounds->lo) << ' '
        << fmt17(bounds->hi) << '\n';
    for (const auto& axis : axes) {
        for (std::size_t i = 0; i < axis.size(); ++i) {
            if (i) out << ' ';
            out << fmt17(axis[i]);
        }
        out << '\n';
    }
    if (!out) throw Error("failed writing projection spec");
}

void ProjectionSpec::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    save(out);
}

ProjectionSpec ProjectionSpec::load(std::istream& in) {
    std::string magic;
    if (!(in >> magic)) throw CorruptionError("empty projection spec");
    if (magic != "PROJ1") {
        if (magic.rfind("PROJ", 0) == 0) throw FormatVersionError("unsupported projection format '" + magic + "'");
        throw CorruptionError("not a projection spec");
    }
    ProjectionSpec spec;
    std::size_t count = 0;
    double lo = 0.0;
    double hi = 0.0;
    if (!(in >> spec.dimension >> count >> spec.seed >> lo >> hi) || spec.dimension < 1 || count < 1) {
        throw CorruptionError("malformed projection header");
    }
    try {
        spec.bounds = NormalizationBounds(lo, hi);
    } catch (const DomainError& e) {
        throw CorruptionError(std::string("invalid projection bounds: ") + e.what());
    }
    spec.axes.assign(count, std::vector<double>(spec.dimension));
    for (auto& axis : spec.axes) {
        for (auto& c : axis) {
            if (!(in >> c)) throw CorruptionError("projection spec truncated");
        }
    }
    return spec;
}

ProjectionSpec ProjectionSpec::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    return load(in);
}

}  // namespace baire
