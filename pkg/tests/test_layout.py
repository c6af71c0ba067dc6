"""Circle layout spectra, barycentric placement, and SVG rendering."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cuisineshift import corpus, layout
from cuisineshift.embeddings import EmbeddingConfig, EmbeddingSpace
from cuisineshift.errors import DataError, NumericalError


def _matrix(weights, names=None):
    w = np.asarray(weights, dtype=np.float64)
    names = tuple(names or (f"c{i}" for i in range(w.shape[0])))
    return layout.CountrySimilarityMatrix(countries=names, weights=w)


def _random_matrix(n, seed):
    rng = np.random.default_rng(seed)
    w = rng.uniform(0.2, 2.0, size=(n, n))
    w = (w + w.T) / 2.0
    np.fill_diagonal(w, 0.0)
    return _matrix(w)


def _space(country_vectors, ingredient_vectors=((0.5, 0.5),)):
    """Embedding space with handpicked country rows."""
    vocab = corpus.Vocabulary(
        ingredients=tuple(f"g{i}" for i in range(len(ingredient_vectors))),
        countries=tuple(f"c{i}" for i in range(len(country_vectors))),
    )
    vecs = np.array(list(ingredient_vectors) + list(country_vectors), dtype=np.float32)
    return EmbeddingSpace(vocab, vecs, np.zeros_like(vecs), EmbeddingConfig(dim=vecs.shape[1]))


# spectra of D^-1 W for hand-solvable graphs:
# all-ones triangle: W = J - I, D = 2I, eigenvalues {1, -1/2, -1/2}
# weighted triangle [[0,2,1],[2,0,1],[1,1,0]]: trace 0 and det(W)/det(D) = 4/18
# pin the spectrum at {1, -1/3, -2/3}
def test_triangle_eigenvalues_match_hand_computation():
    ones = _matrix(np.ones((3, 3)) - np.eye(3))
    lay = layout.spectral_circle_layout(ones)
    np.testing.assert_allclose(lay.eigenvalues, [1.0, -0.5, -0.5], atol=1e-12)

    weighted = _matrix([[0.0, 2.0, 1.0], [2.0, 0.0, 1.0], [1.0, 1.0, 0.0]])
    lay = layout.spectral_circle_layout(weighted)
    np.testing.assert_allclose(lay.eigenvalues, [1.0, -1.0 / 3.0, -2.0 / 3.0], atol=1e-12)


@given(n=st.integers(3, 8), seed=st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_leading_eigenvalue_is_one_for_any_connected_graph(n, seed):
    lay = layout.spectral_circle_layout(_random_matrix(n, seed))
    assert abs(lay.eigenvalues[0] - 1.0) <= 1e-8


@pytest.mark.parametrize("mode", ["largest", "smallest"])
def test_positions_lie_on_unit_circle(mode):
    lay = layout.spectral_circle_layout(_random_matrix(6, 4), mode=mode)
    radii = np.linalg.norm(lay.positions, axis=1)
    np.testing.assert_allclose(radii, 1.0, atol=1e-9)
    assert lay.mode == mode


def test_modes_use_opposite_spectrum_ends():
    m = _random_matrix(5, 99)
    a = layout.spectral_circle_layout(m, mode="largest")
    b = layout.spectral_circle_layout(m, mode="smallest")
    assert not np.allclose(a.positions, b.positions)


def test_unknown_mode_rejected():
    with pytest.raises(DataError):
        layout.spectral_circle_layout(_random_matrix(4, 0), mode="middle")


def test_sign_convention_first_nonzero_positive():
    np.testing.assert_array_equal(layout._fix_sign(np.array([-1.0, 2.0])), [1.0, -2.0])
    np.testing.assert_array_equal(layout._fix_sign(np.array([0.0, -3.0])), [0.0, 3.0])
    v = np.array([0.5, -0.5])
    out = layout._fix_sign(v)
    np.testing.assert_array_equal(out, v)
    out[0] = 7.0  # must be a copy, not a view into the caller's array
    assert v[0] == 0.5


def test_disconnected_graph_rejected():
    w = np.zeros((4, 4))
    w[0, 1] = w[1, 0] = 1.0
    w[2, 3] = w[3, 2] = 1.0
    with pytest.raises(DataError, match="disconnected"):
        layout.spectral_circle_layout(_matrix(w))


def test_similarity_matrix_validation():
    good = np.ones((3, 3)) - np.eye(3)
    with pytest.raises(DataError):
        _matrix(good, names=("a", "b"))  # shape mismatch
    bad = good.copy()
    bad[0, 1] = -0.1
    bad[1, 0] = -0.1
    with pytest.raises(DataError):
        _matrix(bad)
    bad = good.copy()
    bad[0, 1] = 0.7  # asymmetric
    with pytest.raises(DataError):
        _matrix(bad)
    bad = good.copy()
    np.fill_diagonal(bad, 0.5)
    with pytest.raises(DataError):
        _matrix(bad)
    bad = good.copy()
    bad[0, 1] = bad[1, 0] = np.nan
    with pytest.raises(NumericalError):
        _matrix(bad)


def test_country_similarity_clamps_negative_cosines():
    space = _space([(1.0, 0.0), (1.0, 1.0), (-1.0, 1.0)])
    m = layout.country_similarity(space)
    assert m.countries == ("c0", "c1", "c2")
    r = np.sqrt(0.5)
    np.testing.assert_allclose(m.weights, [[0.0, r, 0.0], [r, 0.0, 0.0], [0.0, 0.0, 0.0]],
                               atol=1e-7)
    assert np.all(np.diag(m.weights) == 0.0)


def test_country_similarity_needs_three_countries():
    with pytest.raises(DataError):
        layout.country_similarity(_space([(1.0, 0.0), (0.0, 1.0)]))


def test_zero_country_vector_rejected():
    with pytest.raises(DataError, match="c1"):
        layout.country_similarity(_space([(1.0, 0.0), (0.0, 0.0), (0.0, 1.0)]))


_LAY = layout.spectral_circle_layout(_random_matrix(5, 7))


def test_barycentric_vertex_is_exact():
    for i, c in enumerate(_LAY.countries):
        dist = {k: 0.0 for k in _LAY.countries}
        dist[c] = 1.0
        p = layout.barycentric_position(dist, _LAY)
        assert p.x == _LAY.positions[i, 0]
        assert p.y == _LAY.positions[i, 1]


@given(seed=st.integers(0, 2**32 - 1), t=st.floats(0.0, 1.0))
@settings(max_examples=80, deadline=None)
def test_barycentric_placement_is_linear(seed, t):
    rng = np.random.default_rng(seed)
    p = rng.dirichlet(np.ones(5))
    q = rng.dirichlet(np.ones(5))
    mix = t * p + (1.0 - t) * q
    pa = layout.barycentric_position(dict(zip(_LAY.countries, p)), _LAY)
    pb = layout.barycentric_position(dict(zip(_LAY.countries, q)), _LAY)
    pm = layout.barycentric_position(dict(zip(_LAY.countries, mix)), _LAY)
    np.testing.assert_allclose(
        [pm.x, pm.y],
        [t * pa.x + (1.0 - t) * pb.x, t * pa.y + (1.0 - t) * pb.y],
        atol=1e-12,
    )


@given(seed=st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_barycentric_point_stays_in_unit_disk(seed):
    rng = np.random.default_rng(seed)
    dist = dict(zip(_LAY.countries, rng.dirichlet(np.ones(5))))
    p = layout.barycentric_position(dist, _LAY)
    assert np.hypot(p.x, p.y) <= 1.0 + 1e-12


def test_barycentric_rejects_bad_distributions():
    base = {c: 0.2 for c in _LAY.countries}
    short = dict(base)
    short.pop("c0")
    with pytest.raises(DataError):
        layout.barycentric_position(short, _LAY)
    extra = dict(base, zz=0.0)
    with pytest.raises(DataError):
        layout.barycentric_position(extra, _LAY)
    neg = dict(base, c0=-0.2, c1=0.6)
    with pytest.raises(DataError):
        layout.barycentric_position(neg, _LAY)
    off = {c: 0.3 for c in _LAY.countries}
    with pytest.raises(DataError):
        layout.barycentric_position(off, _LAY)


def test_position_lookup():
    np.testing.assert_array_equal(_LAY.position("c2"), _LAY.positions[2])
    with pytest.raises(DataError):
        _LAY.position("atlantis")
    mapping = _LAY.as_mapping()
    assert set(mapping) == set(_LAY.countries)
    assert mapping["c0"] == (float(_LAY.positions[0, 0]), float(_LAY.positions[0, 1]))


def test_render_svg_is_deterministic_and_escapes_names():
    m = _matrix(np.ones((3, 3)) - np.eye(3), names=('a&b', 'c<d', 'e"f'))
    lay = layout.spectral_circle_layout(m)
    pts = [layout.DiagramPoint(0.0, 0.0), layout.DiagramPoint(0.3, -0.2)]
    svg1 = layout.render_svg(lay, points=pts, labels=["start", "step<1>"])
    svg2 = layout.render_svg(lay, points=pts, labels=["start", "step<1>"])
    assert svg1 == svg2
    assert svg1.startswith("<svg ")
    assert svg1.endswith("</svg>\n")
    assert "a&amp;b" in svg1 and "c&lt;d" in svg1 and "e&quot;f" in svg1
    assert "step&lt;1&gt;" in svg1
    assert "<polyline" in svg1


def test_render_svg_trail_rules():
    lay = layout.spectral_circle_layout(_random_matrix(4, 3))
    single = layout.render_svg(lay, points=[layout.DiagramPoint(0.1, 0.1)])
    assert "<polyline" not in single  # no trail for a single point
    assert single.count('r="3"') == 1
    with pytest.raises(DataError):
        layout.render_svg(lay, points=[layout.DiagramPoint(0.0, 0.0)], labels=["a", "b"])


def test_layout_meta_roundtrip():
    lay = layout.spectral_circle_layout(_random_matrix(5, 11), mode="smallest")
    back = layout.layout_from_meta(layout.layout_to_meta(lay))
    assert back.countries == lay.countries
    assert back.mode == lay.mode
    np.testing.assert_array_equal(back.positions, lay.positions)
    np.testing.assert_array_equal(back.eigenvalues, lay.eigenvalues)


def test_layout_from_trained_space(tiny_space):
    m = layout.country_similarity(tiny_space)
    lay = layout.spectral_circle_layout(m)
    assert len(lay.countries) == len(tiny_space.vocab.countries)
    np.testing.assert_allclose(np.linalg.norm(lay.positions, axis=1), 1.0, atol=1e-9)
    assert abs(lay.eigenvalues[0] - 1.0) <= 1e-8
