from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from kahler_dirac.kahler_atiyah import (
    DimensionMismatch,
    Metric,
    Multivector,
    basis_blades,
    clifford,
    clifford_via_phi,
    contract,
    e,
    format_multivector,
    grade_of,
    hodge_star,
    phi_map,
    scalar_product_cl,
    scalar_product_ext,
    wedge,
)
from kahler_dirac.numbers import I, Num
from kahler_dirac.su2_harmonics import CK_METRIC, theta
import oracles
from strategies import diagonal_metrics, multivectors, vectors

E2 = Metric.euclidean(2)
E3 = Metric.euclidean(3)


def one(dim, c=1):
    return Multivector.scalar(dim, c)


# --- wedge ---------------------------------------------------------------
def test_wedge_unit():
    assert wedge(one(2), e(2, 1, 2)) == e(2, 1, 2)


def test_wedge_nilpotent():
    assert wedge(e(2, 1), e(2, 1)) == Multivector(2)


def test_wedge_graded_commutative_example():
    assert wedge(e(2, 2), e(2, 1)) == -e(2, 1, 2)


def test_wedge_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        wedge(e(2, 1), e(3, 1))


@given(multivectors(4), multivectors(4), multivectors(4))
def test_wedge_associative(a, b, c):
    assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))


@given(st.integers(0, 15), st.integers(0, 15))
def test_wedge_graded_commutative(ma, mb):
    a, b = Multivector.blade(4, ma), Multivector.blade(4, mb)
    s = (-1) ** (grade_of(ma) * grade_of(mb))
    assert wedge(a, b) == wedge(b, a) * s


# --- contraction ---------------------------------------------------------
def test_contract_examples():
    assert contract([1, 0], e(2, 1, 2), E2) == e(2, 2)
    assert contract([1, 0], one(2, 5), E2) == Multivector(2)
    assert contract([1, 0], contract([0, 1], e(2, 1, 2), E2), E2) == one(2, -1)


@given(diagonal_metrics(4), vectors(4), multivectors(4), multivectors(4))
def test_contraction_is_graded_derivation(g, v, a, b):
    comps = [v.coeffs.get(1 << k, 0) for k in range(4)]
    lhs = contract(comps, wedge(a, b), g)
    rhs = wedge(contract(comps, a, g), b) + wedge(a.involution(), contract(comps, b, g))
    assert lhs == rhs


@given(diagonal_metrics(3), vectors(3), vectors(3), multivectors(3))
def test_contractions_anticommute(g, v, w, m):
    cv = [v.coeffs.get(1 << k, 0) for k in range(3)]
    cw = [w.coeffs.get(1 << k, 0) for k in range(3)]
    assert contract(cv, contract(cw, m, g), g) == -contract(cw, contract(cv, m, g), g)


# --- Clifford product ----------------------------------------------------
def test_clifford_examples():
    assert clifford(e(3, 1), e(3, 1), E3) == one(3)
    assert clifford(e(2, 1), e(2, 2), E2) == e(2, 1, 2)
    assert clifford(e(2, 1, 2), e(2, 1, 2), E2) == one(2, -1)


def test_phi_map_examples():
    assert phi_map(1, one(2), E2) == e(2, 1)
    assert phi_map(1, e(2, 1), E2) == one(2)
    assert phi_map(1, e(2, 2), E2) == e(2, 1, 2)


@given(diagonal_metrics(4), vectors(4), vectors(4))
def test_vectors_anticommute_to_metric(g, v, w):
    cv = [v.coeffs.get(1 << k, 0) for k in range(4)]
    cw = [w.coeffs.get(1 << k, 0) for k in range(4)]
    assert clifford(v, w, g) + clifford(w, v, g) == one(4, g.bilinear(cv, cw) * 2)


@given(diagonal_metrics(3), multivectors(3), multivectors(3), multivectors(3))
def test_clifford_associative(g, a, b, c):
    assert clifford(clifford(a, b, g), c, g) == clifford(a, clifford(b, c, g), g)


@given(st.integers(2, 5).flatmap(lambda n: st.tuples(diagonal_metrics(n), multivectors(n), multivectors(n))))
def test_clifford_matches_phi_construction(data):
    g, a, b = data
    assert clifford(a, b, g) == clifford_via_phi(a, b, g)


@given(st.integers(2, 4).flatmap(lambda n: st.tuples(diagonal_metrics(n), multivectors(n), multivectors(n))))
def test_clifford_matches_matrix_oracle(data):
    g, a, b = data
    signs = [int(g.g[k][k].re) for k in range(g.dim)]
    ab = clifford(a, b, g)
    lhs = oracles.multivector_matrix({m: complex(c) for m, c in ab.coeffs.items()}, signs)
    ma = oracles.multivector_matrix({m: complex(c) for m, c in a.coeffs.items()}, signs)
    mb = oracles.multivector_matrix({m: complex(c) for m, c in b.coeffs.items()}, signs)
    assert np.allclose(lhs, ma @ mb, atol=1e-10)


def test_non_diagonal_metric_uses_bilinear_form():
    g = Metric(((0, 1), (1, 0)))
    x, y = e(2, 1), e(2, 2)
    assert clifford(x, y, g) + clifford(y, x, g) == one(2, 2)
    assert clifford(x, x, g) == Multivector(2)


def test_clifford_metric_mismatch():
    with pytest.raises(DimensionMismatch):
        clifford(e(2, 1), e(2, 2), E3)


# --- scalar products -----------------------------------------------------
def test_scalar_product_examples():
    assert scalar_product_ext(e(2, 1), e(2, 1), E2) == 1
    assert scalar_product_ext(e(2, 1), e(2, 1, 2), E2) == 0
    assert scalar_product_ext(e(2, 1, 2), e(2, 1, 2), E2) == 1
    assert scalar_product_cl(one(2), one(2), E2) == 1
    assert scalar_product_cl(e(2, 1), e(2, 1), E2) == 1
    assert scalar_product_cl(e(2, 1, 2), e(2, 1, 2), E2) == 1


@pytest.mark.parametrize("n", [2, 3, 4])
def test_blades_orthonormal_in_euclidean_metric(n):
    g = Metric.euclidean(n)
    blades = list(basis_blades(n))
    for a, b in itertools.product(blades, repeat=2):
        expected = 1 if a == b else 0
        assert scalar_product_ext(a, b, g) == expected
        assert scalar_product_cl(a, b, g) == expected


# --- Hodge star ----------------------------------------------------------
def test_hodge_examples():
    assert hodge_star(one(3), CK_METRIC) == wedge(wedge(theta("x"), theta("y")), theta("z"))
    assert hodge_star(e(2, 1), E2) == e(2, 2)
    assert hodge_star(hodge_star(e(2, 1), E2), E2) == -e(2, 1)


@pytest.mark.parametrize("signs", [s for n in (2, 3, 4, 5) for s in itertools.product((1, -1), repeat=n)])
def test_hodge_sign_rule_on_every_blade(signs):
    g = Metric.diagonal(list(signs))
    n = len(signs)
    sgn = 1 if g.signature > 0 else -1
    for blade in basis_blades(n):
        k = next(iter(blade.grades()))
        assert hodge_star(hodge_star(blade, g), g) == blade * ((-1) ** (k * (n - k)) * sgn)


def test_hodge_orientation_flips_sign():
    assert hodge_star(e(2, 1), E2, orientation=-1) == -e(2, 2)


def test_hodge_rejects_irrational_volume():
    with pytest.raises(ValueError, match="rescale"):
        hodge_star(e(2, 1), Metric.diagonal([2, 1]))


# --- representation details ---------------------------------------------
def test_generator_out_of_range():
    with pytest.raises(DimensionMismatch):
        e(3, 4)


def test_formatting_and_json_roundtrip():
    m = e(3, 1, 2) * Num(0, 2) - one(3, 1)
    assert format_multivector(e(3, 3)) == "e3"
    assert Multivector.from_json(m.to_json()) == m


@given(multivectors(3))
def test_involutions(m):
    assert m.reverse().reverse() == m
    assert m.involution().involution() == m
    assert (m * I).conjugate() == m.conjugate() * (-I)
