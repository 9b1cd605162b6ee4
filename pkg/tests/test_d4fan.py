from __future__ import annotations

import random

import pytest

from a4toric.cones import Cone, cone_dim
from a4toric.d4fan import (
    COORD_PAIRS,
    D4_BASIS,
    FanConstructionError,
    SymMatrix,
    _canon,
    build_d4_form,
    build_eta,
    build_rays,
    build_star_fan,
    compute_stabilizer,
    minimal_vectors,
)
from a4toric.exact import gcd_content, int_det
from a4toric.intersection import evaluate_recursive

EXPECTED_GRAM = (
    (2, -1, 0, 0),
    (-1, 2, -1, -1),
    (0, -1, 2, 0),
    (0, -1, 0, 2),
)
EXPECTED_ETA = (2, 4, 2, 2, 2, 1, 1, 2, 2, 1)


def _norm(q, c):
    return sum(c[i] * q[i][j] * c[j] for i in range(4) for j in range(4))


def test_d4_form():
    q = build_d4_form()
    assert q == EXPECTED_GRAM
    assert int_det(q) == 4
    assert all(q[i][j] == q[j][i] for i in range(4) for j in range(4))
    # Each basis column has squared length 2 in the standard metric,
    # which is the diagonal of the Gram matrix.
    assert all(sum(x * x for x in col) == 2 for col in zip(*D4_BASIS))
    assert all(q[j][j] == 2 for j in range(4))
    assert all(_norm(q, tuple(int(i == j) for i in range(4))) == 2 for j in range(4))


def test_minimal_vectors():
    q = build_d4_form()
    vecs = minimal_vectors()
    assert len(vecs) == 24
    assert len(set(vecs)) == 24
    assert all(_norm(q, c) == 2 for c in vecs)
    assert all(tuple(-x for x in c) in set(vecs) for c in vecs)
    assert all(gcd_content(c) == 1 for c in vecs)
    assert list(vecs) == sorted(vecs)


def test_minimal_vectors_rejects_scaled_gram():
    doubled = tuple(tuple(2 * x for x in row) for row in EXPECTED_GRAM)
    with pytest.raises(FanConstructionError):
        minimal_vectors(doubled)


def test_sym_matrix_examples():
    basis_vec = SymMatrix.from_vector((1, 0, 0, 0))
    assert basis_vec.coords == (1, 0, 0, 0, 0, 0, 0, 0, 0, 0)
    longest = SymMatrix.from_vector((1, 2, 1, 1))
    assert longest.coords == (1, 4, 1, 1, 2, 1, 1, 2, 2, 1)
    assert SymMatrix.from_coords(longest.coords) == longest
    assert len(COORD_PAIRS) == 10
    with pytest.raises(ValueError):
        SymMatrix(((0, 1, 0, 0), (0, 0, 0, 0), (0, 0, 0, 0), (0, 0, 0, 0)))
    with pytest.raises(ValueError):
        SymMatrix.from_coords((1, 2, 3))


def test_sym_matrix_transform():
    s = SymMatrix.from_vector((1, 2, 1, 1))
    identity = tuple(tuple(int(i == j) for j in range(4)) for i in range(4))
    assert s.transform(identity) == s
    neg = tuple(tuple(-int(i == j) for j in range(4)) for i in range(4))
    assert s.transform(neg) == s
    swap01 = ((0, 1, 0, 0), (1, 0, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))
    assert s.transform(swap01) == SymMatrix.from_vector((2, 1, 1, 1))


def test_rays():
    rays = build_rays()
    assert len(rays) == 12
    coords = [g.coords for g in rays]
    assert len(set(coords)) == 12
    assert all(gcd_content(c) == 1 for c in coords)
    assert cone_dim(Cone(10, tuple(coords))) == 10


def test_eta():
    rays = build_rays()
    eta = build_eta(rays)
    assert eta.coords == EXPECTED_ETA
    total = [sum(g.coords[k] for g in rays) for k in range(10)]
    assert gcd_content(total) == 3
    assert tuple(x // 3 for x in total) == EXPECTED_ETA


def test_star_fan_structure(star):
    assert star.gram == EXPECTED_GRAM
    assert star.eta.coords == EXPECTED_ETA
    assert star.eta_content == 3
    assert star.e_index == 0
    assert len(star.gammas) == 12
    assert len(star.facets) == 64
    assert all(len(f.incident) == 9 for f in star.facets)
    assert len(star.fan.rays) == 13
    assert star.fan.rays[0] == EXPECTED_ETA
    assert star.fan.rays[1:] == tuple(g.coords for g in star.gammas)
    assert len(star.fan.top_cones) == 64
    # Bijection between facets and cones: each cone is the barycenter
    # plus the facet's rays shifted by one.
    cone_sets = {frozenset({0} | {1 + i for i in f.incident}) for f in star.facets}
    assert cone_sets == set(star.fan.top_cones)
    assert all(0 in c for c in star.fan.top_cones)
    for c in star.fan.top_cones:
        assert abs(int_det([star.fan.rays[i] for i in sorted(c)])) == 1
    # The barycenter is strictly interior and each boundary ray lies on
    # exactly 16 of the 64 facets, hence in 48 of the 64 cones.
    for f in star.facets:
        assert sum(a * b for a, b in zip(f.normal, EXPECTED_ETA)) > 0
    for i in range(12):
        assert sum(i in f.incident for f in star.facets) == 48
    for idx in range(1, 13):
        assert sum(idx in c for c in star.fan.top_cones) == 48


def test_star_fan_determinism(star):
    again = build_star_fan()
    assert again.fan == star.fan
    assert again.facets == star.facets
    assert again.ray_vectors == star.ray_vectors


def test_stabilizer_order(stabilizer):
    assert stabilizer.order == 1152
    assert len(stabilizer.elements) == 1152
    assert len(stabilizer.matrix_set()) == 1152


def test_stabilizer_elements(star, stabilizer):
    q = star.gram
    identity = tuple(tuple(int(i == j) for j in range(4)) for i in range(4))
    neg = tuple(tuple(-x for x in row) for row in identity)
    mats = stabilizer.matrix_set()
    assert identity in mats
    assert neg in mats
    by_matrix = {e.matrix: e for e in stabilizer.elements}
    assert by_matrix[identity].ray_permutation == tuple(range(12))
    assert by_matrix[neg].ray_permutation == tuple(range(12))
    rng = random.Random(97)
    sample = rng.sample(stabilizer.elements, 12)
    for el in sample:
        g = el.matrix
        gram_image = tuple(
            tuple(
                sum(g[k][i] * q[k][l] * g[l][j] for k in range(4) for l in range(4))
                for j in range(4)
            )
            for i in range(4)
        )
        assert gram_image == q
        assert sorted(el.ray_permutation) == list(range(12))
    for a in sample[:6]:
        for b in sample[:6]:
            product = tuple(
                tuple(sum(a.matrix[i][k] * b.matrix[k][j] for k in range(4)) for j in range(4))
                for i in range(4)
            )
            assert product in mats


def test_stabilizer_is_transitive_on_rays(stabilizer):
    orbit = {el.ray_permutation[0] for el in stabilizer.elements}
    assert orbit == set(range(12))


@pytest.mark.parametrize(
    "u",
    [
        ((1, 1, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)),
        ((0, 1, 0, 0), (1, 0, 0, 0), (0, 0, 1, 1), (0, 0, 0, -1)),
    ],
)
def test_change_of_basis_invariance(u):
    moved = build_star_fan(change_of_basis=u)
    assert len(moved.gammas) == 12
    assert len(moved.facets) == 64
    assert len(moved.fan.top_cones) == 64
    assert moved.eta_content == 3
    assert moved.gram == build_d4_form(change_of_basis=u)
    top = tuple(10 if i == 0 else 0 for i in range(13))
    assert evaluate_recursive(top, moved.fan, moved.e_index) == -1680


def test_change_of_basis_stabilizer_order():
    u = ((1, 1, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))
    moved = build_star_fan(change_of_basis=u)
    assert compute_stabilizer(moved).order == 1152


def test_change_of_basis_rejects_non_unimodular():
    bad = ((2, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))
    with pytest.raises(ValueError):
        build_star_fan(change_of_basis=bad)
    with pytest.raises(ValueError):
        build_d4_form(change_of_basis=bad)


def test_canon():
    assert _canon((0, -1, 2, 0)) == (0, 1, -2, 0)
    assert _canon((1, -1, 0, 0)) == (1, -1, 0, 0)
    with pytest.raises(ValueError):
        _canon((0, 0, 0, 0))
