"""Molecule vectors, the LP norm, vertex certificates, decompositions."""

import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

import freelip as fl
from freelip.polytope import (
    DimensionMismatch,
    FloatModeUnsupported,
    NotDistinct,
    TooManyPoints,
)
from support import (
    CHAIN,
    EQUILATERAL,
    VEE,
    random_exact_space,
    random_float_space,
    random_space_with_midpoint,
)


# -- molecule vectors -------------------------------------------------------


def test_molecule_unit_coordinates():
    sp = fl.validate([[0, 1, 1], [1, 0, 2], [1, 2, 0]], ["e", "a", "b"], base="e")
    assert fl.molecule_vector(sp, "a", "e").vector == (F(1), F(0))
    assert fl.molecule_vector(sp, "a", "b").vector == (F(1, 2), F(-1, 2))


def test_molecule_antisymmetry():
    rng = random.Random(3)
    sp = random_exact_space(rng, 6)
    for _ in range(10):
        p, q = rng.sample(range(6), 2)
        upq = fl.molecule_vector(sp, p, q).vector
        uqp = fl.molecule_vector(sp, q, p).vector
        assert uqp == tuple(-v for v in upq)


def test_molecule_coefficients_sum_to_zero_with_base():
    # Dropping the base coordinate: the full coefficient vector of
    # j(p) - j(q) sums to zero, so the sum over non-base points is the
    # negative of the implicit base coefficient.
    sp = VEE
    m = fl.molecule_vector(sp, "a", "b")
    assert sum(m.vector) == 0  # neither point is the base
    m2 = fl.molecule_vector(sp, "a", "e")
    assert sum(m2.vector) == F(1, 1)  # base coefficient -1 was dropped


# -- free norm ----------------------------------------------------------------


def test_free_norm_zero_vector():
    assert fl.free_norm(EQUILATERAL, [0, 0]) == 0
    assert fl.free_norm(EQUILATERAL, fl.FreeVector((F(0), F(0)))) == 0


def test_free_norm_molecules_are_unit():
    rng = random.Random(5)
    for _ in range(8):
        sp = random_exact_space(rng, rng.randint(3, 6))
        for p in range(sp.n):
            for q in range(sp.n):
                if p != q:
                    m = fl.molecule_vector(sp, p, q)
                    assert fl.free_norm(sp, m.vector) == 1


def test_free_norm_homogeneity_and_triangle():
    rng = random.Random(7)
    sp = random_exact_space(rng, 5)
    a = [F(rng.randint(-5, 5), 2) for _ in range(4)]
    b = [F(rng.randint(-5, 5), 3) for _ in range(4)]
    na, nb = fl.free_norm(sp, a), fl.free_norm(sp, b)
    assert fl.free_norm(sp, [2 * v for v in a]) == 2 * na
    nsum = fl.free_norm(sp, [x + y for x, y in zip(a, b)])
    assert nsum <= na + nb
    assert (na == 0) == all(v == 0 for v in a)


def test_free_norm_duality_witness():
    rng = random.Random(9)
    for _ in range(6):
        sp = random_exact_space(rng, 5)
        a = [F(rng.randint(-6, 6)) for _ in range(4)]
        value, witness = fl.free_norm(sp, a, with_witness=True)
        f = [witness[lab] if lab in witness else F(0) for lab in sp.labels]
        f[sp.base_index] = F(0)
        # witness is feasible (unit ball) and attains the optimum
        assert fl.lipschitz_constant(sp, f) <= 1
        assert fl.pairing(sp, a, f) == value
        # the optimum is a support value over the molecule polytope: no
        # molecule pairs against f above 1, and the norm bounds a.f from above
        for p in range(5):
            for q in range(5):
                if p != q:
                    assert abs(fl.phi(sp, f, p, q)) <= 1


def test_free_norm_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        fl.free_norm(EQUILATERAL, [1, 2, 3])


def test_free_norm_float_mode():
    rng = random.Random(11)
    sp = random_float_space(rng, 4)
    m = fl.molecule_vector(sp, 1, 2)
    assert abs(fl.free_norm(sp, m.vector) - 1.0) < 1e-12


# -- vertex oracle ------------------------------------------------------------


def test_is_vertex_vee_examples():
    cert = fl.is_vertex(VEE, "a", "b")
    assert not cert.vertex
    assert cert.weights == {("a", "e"): F(1, 2), ("e", "b"): F(1, 2)}
    cert2 = fl.is_vertex(VEE, "e", "a")
    assert cert2.vertex and cert2.separating is not None and cert2.margin > 0


def test_is_vertex_equilateral_hexagon():
    for p in range(3):
        for q in range(3):
            if p != q:
                assert fl.is_vertex(EQUILATERAL, p, q).vertex


def test_is_vertex_requires_exact_mode():
    rng = random.Random(13)
    sp = random_float_space(rng, 4)
    with pytest.raises(FloatModeUnsupported):
        fl.is_vertex(sp, 0, 1)


def test_oracle_point_guard():
    rng = random.Random(15)
    sp = random_exact_space(rng, 13)
    with pytest.raises(TooManyPoints):
        fl.is_vertex(sp, 0, 1)
    with pytest.raises(TooManyPoints):
        fl.free_norm(sp, [1] * 12)
    assert fl.is_vertex(sp, 0, 1, max_points=13) is not None


def test_is_vertex_agrees_with_classifier_eight_points():
    rng = random.Random(17)
    for k in range(3):
        if k % 2:
            sp, _ = random_space_with_midpoint(rng, 8)
        else:
            sp = random_exact_space(rng, 8)
        for p in range(8):
            for q in range(p + 1, 8):
                verdict = fl.classify_pair(sp, p, q).is_extreme
                assert fl.is_vertex(sp, p, q).vertex == verdict


def test_is_vertex_separating_functional_checks_out():
    rng = random.Random(19)
    sp = random_exact_space(rng, 5)
    from freelip.polytope import all_molecules

    for p in range(5):
        for q in range(p + 1, 5):
            cert = fl.is_vertex(sp, p, q)
            if not cert.vertex:
                continue
            labels = [lab for i, lab in enumerate(sp.labels) if i != sp.base_index]
            phi_vec = [cert.separating[lab] for lab in labels]
            target = fl.molecule_vector(sp, p, q).vector
            t_val = sum(a * b for a, b in zip(phi_vec, target))
            for m in all_molecules(sp):
                if (m.p, m.q) == (sp.labels[p], sp.labels[q]):
                    continue
                other = sum(a * b for a, b in zip(phi_vec, m.vector))
                assert t_val - other >= cert.margin


# -- decomposition --------------------------------------------------------------


def test_decomposition_middle_point_convex():
    rep = fl.decomposition_check(CHAIN, "a", "b", "c")
    assert rep.w1 == rep.w2 == F(1, 2)
    assert rep.coefficient_sum == 1
    assert rep.is_convex_combination
    assert all(v == 0 for v in rep.residual)


def test_decomposition_equilateral_not_convex():
    sp = fl.validate([[0, 1, 1], [1, 0, 1], [1, 1, 0]], ["a", "b", "e"], base="e")
    rep = fl.decomposition_check(sp, "a", "b", "e")
    assert rep.w1 == rep.w2 == F(1)
    assert rep.coefficient_sum == 2
    assert not rep.is_convex_combination
    assert all(v == 0 for v in rep.residual)


def test_decomposition_requires_distinct_points():
    with pytest.raises(NotDistinct):
        fl.decomposition_check(CHAIN, "a", "b", "a")


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6), st.integers(3, 7))
def test_decomposition_coefficient_law(seed, n):
    rng = random.Random(seed)
    sp = random_exact_space(rng, n)
    p, q, r = rng.sample(range(n), 3)
    rep = fl.decomposition_check(sp, p, q, r)
    exc = fl.excess(sp, r, p, q).value
    assert rep.coefficient_sum == 1 + exc / sp.dist[p][q]
    assert all(v == 0 for v in rep.residual)
    assert rep.is_convex_combination == (exc == 0)
