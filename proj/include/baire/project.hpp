#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "baire/codec.hpp"

namespace baire {

/// Seeded random axes plus the bounds fitted on projected training values.
///
/// Axes are generated by std::mt19937_64 seeded with `seed`. Each output word
/// x becomes a uniform u = (x >> 11) * 2^-53, and consecutive uniform pairs
/// (u1, u2) give two standard normals through Box-Muller:
///   r = sqrt(-2 ln(1 - u1)),  z0 = r cos(2 pi u2),  z1 = r sin(2 pi u2).
/// Components are filled axis by axis, then each axis is scaled to unit norm.
struct ProjectionSpec {
    std::size_t dimension = 0;
    std::uint64_t seed = 0;
    std::vector<std::vector<double>> axes;
    std::optional<NormalizationBounds> bounds;

    std::size_t axis_count() const noexcept { return axes.size(); }

    /// The d = 1 pass-through: a single axis [+1].
    static ProjectionSpec identity();

    void save(std::ostream& out) const;
    void save(const std::filesystem::path& path) const;
    static ProjectionSpec load(std::istream& in);
    static ProjectionSpec load(const std::filesystem::path& path);
};

ProjectionSpec make_spec(std::size_t dimension, std::size_t axis_count, std::uint64_t seed);

/// Mean over axes of axis . record.
double project(std::span<const double> record, const ProjectionSpec& spec);

/// Bounds set to (min, max) of `projected`.
ProjectionSpec fit_bounds(ProjectionSpec spec, std::span<const double> projected);

/// project -> normalize against the fitted bounds -> encode. Values outside
/// the bounds are pinned to the nearest bound and `clamped` is raised.
DigitCode encode_record(std::span<const double> record, const ProjectionSpec& spec, int base, int precision,
                        bool& clamped);

}  // namespace baire
