import itertools

import numpy as np
import pytest

import baire


def three_records():
    return [("a", baire.encode(0.478, 10, 3)), ("b", baire.encode(0.472, 10, 3)), ("c", baire.encode(0.9, 10, 3))]


def test_encode_and_distance():
    code = baire.encode(0.478, 10, 3)
    assert code.digits == [4, 7, 8]
    assert str(code) == "478"
    d = baire.baire_distance(code, baire.encode(0.472, 10, 3))
    assert d.lcp == 2
    assert d.value == 0.01
    assert baire.lcp(code, code) == 3
    assert baire.decode(code) == pytest.approx(0.478)


def test_domain_errors():
    with pytest.raises(baire.DomainError):
        baire.encode(1.5, 10, 3)
    with pytest.raises(baire.BaireError):
        baire.DigitCode.from_string("12", 1)


def test_bins_per_level():
    index = baire.MadicIndex.build([("a", baire.encode(0.3475, 10, 4))], 10, 4)
    prefixes = [str(index.bins_at_level(l)[0].prefix) for l in range(1, 5)]
    assert prefixes == ["3", "34", "347", "3475"]


def test_nearest_neighbor():
    index = baire.MadicIndex.build(three_records(), 10, 3)
    nb = index.nearest_neighbor("a")
    assert nb["id"] == "b"
    assert nb["proximity"].value == 0.01
    assert nb["probes"] <= 4
    assert index.nearest_neighbor("c")["proximity"].lcp == 0
    assert index.um_distance("a", "b").lcp == 2
    with pytest.raises(baire.UnknownIdError):
        index.nearest_neighbor("zz")


def test_save_load_round_trip(tmp_path):
    index = baire.MadicIndex.build(three_records(), 10, 3)
    path = tmp_path / "ix.madic"
    index.save(path)
    loaded = baire.MadicIndex.load(path)
    assert loaded.same_bins(index)
    assert loaded.ids == ["a", "b", "c"]
    data = bytearray(path.read_bytes())
    data[20] ^= 1
    path.write_bytes(bytes(data))
    with pytest.raises(baire.CorruptionError):
        baire.MadicIndex.load(path)


def test_grid_cluster():
    records = [(f"a{i}", baire.DigitCode.from_string(f"34{i}", 10)) for i in range(5)]
    records += [("b", baire.DigitCode.from_string("350", 10)), ("c", baire.DigitCode.from_string("600", 10))]
    index = baire.MadicIndex.build(records, 10, 3)
    labeling = baire.grid_cluster(index, 2, 3)
    assert labeling.cluster_count == 1
    assert labeling.label_of("b") == 0
    assert labeling.label_of("c") == baire.NOISE


def test_kmeans_and_rand_index():
    rng = np.random.default_rng(1)
    data = np.vstack([rng.normal(0, 0.1, (20, 2)), rng.normal(10, 0.1, (20, 2))])
    result = baire.kmeans(data, 2, seed=4)
    assert result.converged
    assert result.centroids.shape == (2, 2)
    truth = [0] * 20 + [1] * 20
    assert baire.rand_index(result.labels, truth).rand_index == 1.0
    score = baire.rand_index([0, 0, 1, 1], [0, 1, 0, 1])
    assert score.rand_index == pytest.approx(1 / 3)
    assert score.total_pairs == 6


def test_ultrametricity_alpha():
    codes = [baire.encode(v, 10, 4) for v in np.linspace(0.01, 0.99, 12)]
    assert baire.ultrametricity_alpha(codes, 10_000, 1e-9).alpha == 1.0
    line = np.array([[float(i), 0.0] for i in range(8)])
    report = baire.ultrametricity_alpha(line, 10_000, 1e-9)
    assert report.triplets_sampled == len(list(itertools.combinations(range(8), 3)))
    assert report.alpha == 0.0


def test_projection():
    spec = baire.make_spec(3, 2, 7)
    assert spec.axis_count == 2
    fitted = baire.fit_bounds(spec, [0.0, 2.0])
    code, clamped = baire.encode_record([5.0, 5.0, 5.0], fitted, 10, 3)
    assert clamped
    assert code.precision == 3
