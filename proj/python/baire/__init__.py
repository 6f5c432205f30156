"""Baire (m-adic) hierarchical clustering and ultrametric search."""

from ._core import (
    BaireError,
    BaireProximity,
    BinStat,
    ClusterLabeling,
    CorruptionError,
    DigitCode,
    DomainError,
    DuplicateIdError,
    EmptyIndexError,
    FormatVersionError,
    KMeansResult,
    LevelError,
    MadicIndex,
    MismatchError,
    NOISE,
    NoNeighborError,
    NormalizationBounds,
    PartitionScore,
    PrefixBin,
    ProjectionSpec,
    RangeError,
    TraversalStats,
    UltrametricityReport,
    UnknownIdError,
    baire_distance,
    cell_densities,
    check_isosceles,
    check_ultrametric_triplet,
    decode,
    encode,
    encode_record,
    fit_bounds,
    grid_cluster,
    identify_centers,
    kmeans,
    lcp,
    make_spec,
    max_precision,
    merge_neighbors,
    normalize,
    project,
    rand_index,
    scaling_benchmark,
    sort_by_density,
    truncate,
    ultrametricity_alpha,
)

__all__ = [name for name in dir() if not name.startswith("_")]
