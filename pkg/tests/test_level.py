from __future__ import annotations

import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from decswamp import level as lv
from decswamp import swamp
from decswamp.errors import (
    EmptyCandidates,
    NonIsomorphismV,
    OutOfRange,
    RelationViolated,
    ZeroComponent,
    ZeroScalar,
)
from decswamp.flags import Subspace, make_weighted_flag
from decswamp.selfcheck import rand_decomposition, rand_flag, rand_invertible
from decswamp.swamp import make_numeric_flag

E1, E2 = [1, 0], [0, 1]
W = [Subspace.span([E2], 2)]
BOUNDARY = (1, 2)


def boundary_decomposition(lifts=None):
    lifts = lifts or [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]
    return lv.make_decomposition(2, BOUNDARY, [0], [[E2]], [[E1]], lifts)


def line(deg, vec):
    return make_numeric_flag(2, [deg], [1], [[vec]])


CANDIDATES = [line(-1, E1), line(-1, E2), line(0, [1, 1])]


def test_c_index_bounds():
    assert lv.c_index_bounds(1, BOUNDARY) == (0, 0, 1, 1)
    assert lv.c_index_bounds(2, BOUNDARY) == (1, 1, 2, 2)
    assert lv.c_index_bounds(1, (2,)) == (0, 0, 1, 2)
    with pytest.raises(OutOfRange):
        lv.c_index_bounds(3, BOUNDARY)


def test_c_i_examples():
    span = lambda v: Subspace.span([v], 2)
    assert [lv.c_i(span(E1), W, i, BOUNDARY) for i in (1, 2)] == [1, 1]
    assert [lv.c_i(span(E2), W, i, BOUNDARY) for i in (1, 2)] == [0, 1]
    assert [lv.c_i(span(E2), [], i, (2,)) for i in (1, 2)] == [1, 1]


def test_q_poly():
    assert [lv.q_poly(s, (1, 1), 2) for s in range(3)] == [0, F(1, 2), 0]
    assert [lv.q_poly(s, (1, 2, 3), 3) for s in range(4)] == [0, F(4, 3), F(5, 3), 0]
    with pytest.raises(OutOfRange):
        lv.q_poly(3, (1, 1), 2)


def test_omega_check_strata():
    open_point = lv.make_completed_hom(2, [[[1, 0], [0, 1]], [[1]]], [1])
    assert lv.omega_check(open_point) == (2,)
    assert lv.omega_check(lv.reconstruct_completed_hom(boundary_decomposition())) == BOUNDARY
    with pytest.raises(RelationViolated):
        lv.omega_check(lv.make_completed_hom(2, [[[1, 0], [0, 1]], [[2]]], [1]))
    with pytest.raises(ZeroComponent):
        lv.omega_check(lv.make_completed_hom(2, [[[0, 0], [0, 0]], [[1]]], [1]))


def test_torus_action():
    point = lv.make_completed_hom(2, [[[1, 0], [0, 1]], [[1]]], [1])
    assert lv.torus_act([1, 1], point) == point
    assert lv.omega_check(lv.torus_act([2, F(1, 3)], point)) == (2,)
    with pytest.raises(ZeroScalar):
        lv.torus_act([0, 1], point)


def test_reconstruct_examples():
    dec = lv.make_decomposition(2, (2,), [1], [], [], [[[1, 0], [0, 1]]])
    point = lv.reconstruct_completed_hom(dec)
    assert point.f[1] == ((1,),) and point.l == (1,)
    bd = lv.reconstruct_completed_hom(boundary_decomposition())
    assert bd.f[0] == ((1, 0), (0, 0)) and bd.f[1] == ((1,),)
    assert lv.extract_flags(bd) == ((W[0],), (Subspace.span([E1], 2),))
    with pytest.raises(NonIsomorphismV):
        boundary_decomposition([[[0, 0], [0, 0]], [[0, 0], [0, 1]]])


def test_mu_level_examples():
    assert lv.mu_level_oracle(make_weighted_flag(2, [[E1]], [1]), W, BOUNDARY, 1) == 1
    assert lv.mu_level_oracle(make_weighted_flag(2, [[E2]], [1]), W, BOUNDARY, 1) == -1
    point = lv.reconstruct_completed_hom(boundary_decomposition())
    assert lv.mu_level_tensor(make_weighted_flag(2, [[E2]], [1]), point, 1) == -1


def test_lemma_examples():
    assert lv.lemma_identity_check(Subspace.span([E1], 2), 1, W, BOUNDARY, (1, 1)) == (1, 1, True)
    assert lv.lemma_identity_check(Subspace.full(2), 2, W, BOUNDARY, (1, 1))[2]


def test_level_and_seshadri_examples():
    rep = lv.level_stable(2, 0, W, BOUNDARY, F(1, 3), (1, 1), CANDIDATES)
    assert rep.verdict == swamp.STABLE and [v for _, v in rep.values] == [F(7, 3), F(5, 3), F(1, 3)]
    assert lv.level_stable(2, 0, W, BOUNDARY, F(1, 3), (1, 1), [line(1, E1)]).verdict == swamp.UNSTABLE
    with pytest.raises(EmptyCandidates):
        lv.level_stable(2, 0, W, BOUNDARY, F(1, 3), (1, 1), [])
    f = [[1, 0], [0, 0]]
    assert lv.seshadri_value(2, 0, f, F(1, 3), line(-1, E1)) == F(7, 3)
    assert lv.seshadri_value(2, 0, f, 1, line(-1, E1)) == 2 + 1
    with pytest.raises(ZeroComponent):
        lv.seshadri_stable(2, 0, [[0, 0], [0, 0]], 1, CANDIDATES)


def test_zero_delta_is_slope_condition():
    for c in CANDIDATES:
        assert lv.level_value(2, 0, 0, (1, 1), W, BOUNDARY, c) == 0 * 1 - c.degrees[0] * 2


def test_worked_margins_agree():
    point = lv.reconstruct_completed_hom(boundary_decomposition())
    for c in CANDIDATES:
        value = lv.level_value(2, 0, F(1, 3), (1, 1), W, BOUNDARY, c)
        assert lv.ngo_dac_margin(c.degrees[0], c.x0[0], 0, F(1, 3), (1, 1), BOUNDARY, W) == value
        assert lv.level_decorated_value(point, 0, F(1, 3), (1, 1), c) == value


@given(st.integers(0, 10 ** 6))
def test_random_decompositions(seed):
    rng = random.Random(seed)
    r = rng.randint(1, 3)
    dec = rand_decomposition(rng, r)
    point = lv.reconstruct_completed_hom(dec)
    assert lv.omega_check(point) == dec.stratum
    assert lv.extract_flags(point) == (dec.w, dec.w_prime)
    flag = rand_flag(rng, r)
    for i in range(1, r + 1):
        assert lv.mu_level_oracle(flag, dec.w, dec.stratum, i) == lv.mu_level_tensor(flag, point, i)
    theta = tuple(rng.randint(1, 3) for _ in range(r))
    x0 = Subspace.span(rand_invertible(rng, r, sparse=True)[:rng.randint(0, r)], r)
    assert lv.lemma_identity_check(x0, x0.dim, dec.w, dec.stratum, theta)[2]
    if 0 < x0.dim < r:
        c = swamp.NumericFlag((rng.randint(-2, 1),), (F(1),), (x0,), (x0,))
        delta2 = F(rng.randint(0, 4), rng.randint(1, 5))
        value = lv.level_value(r, 0, delta2, theta, dec.w, dec.stratum, c)
        assert lv.ngo_dac_margin(c.degrees[0], x0, 0, delta2, theta, dec.stratum, dec.w) == value
        assert lv.level_decorated_value(point, 0, delta2, theta, c) == value
