from __future__ import annotations

import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from decswamp import swamp
from decswamp.errors import EmptyCandidates, H0Unavailable, NoSplitModel, NonPositiveWeight, UnrealizableDegree
from decswamp.flags import Subspace, make_weighted_flag
from decswamp.selfcheck import rand_numeric_flag, rand_form
from decswamp.swamp import SwampConfig, make_numeric_flag
from decswamp.tensor import (
    DecorationForm,
    TensorRepSpec,
    elementary_form,
    mu_tensor,
    orthogonal_splitting,
    support_nonzero,
)

E1, E2 = [1, 0], [0, 1]
TRIV = TensorRepSpec(0, 1, 0, 2)
STD = TensorRepSpec(1, 1, 0, 2)
ONE = DecorationForm.from_coefficients(TRIV, {(0, ()): 1})


def config(s=None, split=None, d=0):
    s = s if s is not None else elementary_form(STD, (0,))
    return SwampConfig(2, d, 0, 0, TRIV, STD, ONE, s, split)


def line(deg, vec, weight=1):
    return make_numeric_flag(2, [deg], [weight], [[vec]])


F1, F2, F3 = line(0, E1), line(0, E2), line(-1, E2)


def test_slope_excess_examples():
    c = config()
    assert swamp.slope_excess(c, line(-1, E1)) == 2
    assert swamp.slope_excess(c, line(0, E1)) == 0
    assert swamp.slope_excess(c, line(-1, E1, 2)) == 4


def test_stability_functional_examples():
    c = config()
    assert swamp.stability_functional(c, F1, 0, F(1, 2)) == F(1, 2)
    assert swamp.stability_functional(c, F2, 0, F(1, 2)) == F(-1, 2)
    assert swamp.stability_functional(c, F3, 0, F(1, 2)) == F(3, 2)
    assert swamp.stability_functional(c, line(0, E2, 3), 0, F(1, 2)) == F(-3, 2)


def test_functional_is_affine_in_deltas():
    c = SwampConfig(2, 0, 0, 0, STD, STD, elementary_form(STD, (1,)), elementary_form(STD, (0,)))
    m, mu1, mu2 = swamp.functional_terms(c, F3)
    for d1, d2 in [(0, 0), (1, 0), (0, 1), (F(2, 3), F(5, 7))]:
        assert swamp.stability_functional(c, F3, d1, d2) == m + d1 * mu1 + d2 * mu2


def test_negative_delta_rejected():
    with pytest.raises(NonPositiveWeight):
        swamp.stability_functional(config(), F1, -1, 0)


def test_check_stability_verdicts():
    c = config()
    rep = swamp.check_stability(c, [F1, F2, F3], 0, F(1, 2))
    assert rep.verdict == swamp.UNSTABLE and rep.witness == F2
    walls = swamp.delta_walls(c, [F3], 0)
    assert walls == [2]
    rep = swamp.check_stability(c, [line(-1, E2)], 0, walls[0])
    assert rep.verdict == swamp.SEMISTABLE and rep.witness == line(-1, E2)
    assert swamp.check_stability(c, [F1], 0, F(1, 2)).verdict == swamp.STABLE
    strict = swamp.check_stability(c, [F1], 0, F(1, 2), strict=True)
    assert strict.verdict == swamp.INCONCLUSIVE
    with pytest.raises(EmptyCandidates):
        swamp.check_stability(c, [], 0, 1)


def test_delta_walls_range_and_flat_candidates():
    c = config()
    assert swamp.delta_walls(c, [F3], 0, (0, 1)) == []
    assert swamp.delta_walls(c, [F3], 0, (2, 2)) == [2]
    flat = SwampConfig(2, 0, 0, 0, TRIV, TRIV, ONE, ONE)
    assert swamp.delta_walls(flat, [F3], 0) == []


def test_enumerate_candidates_examples():
    c = config(split=(0, 0))
    cands = swamp.enumerate_candidates(c, 1)
    assert [f.generic[0] for f in cands] == [Subspace.coordinate(2, [0]), Subspace.coordinate(2, [1])]
    assert swamp.non_coordinate_count((0, 0), cands) == 2
    c2 = config(split=(1, -1))
    assert any(f.degrees == (1,) and f.ranks == (1,) for f in swamp.enumerate_candidates(c2))
    assert swamp.non_coordinate_count((1, -1), swamp.enumerate_candidates(c2)) == 1
    assert swamp.enumerate_candidates(c, 0) == []
    with pytest.raises(NoSplitModel):
        swamp.enumerate_candidates(config())


def test_enumerate_counts_rank_three():
    s = DecorationForm.from_coefficients(TensorRepSpec(1, 1, 0, 3), {(0, (0,)): 1})
    c = SwampConfig(3, 0, 0, 0, TensorRepSpec(0, 1, 0, 3), s.spec,
                    DecorationForm.from_coefficients(TensorRepSpec(0, 1, 0, 3), {(0, ()): 1}), s, (0, 0, 0))
    # 3 lines + 3 planes + 6 complete flags
    assert len(swamp.enumerate_candidates(c)) == 12


def test_unrealizable_degree():
    c = config(split=(1, -1))
    with pytest.raises(UnrealizableDegree):
        swamp.stability_functional(c, line(2, E1), 0, 1)


def test_section_functional_examples():
    c = config(split=(0, 0))
    assert swamp.section_excess(c, line(0, E1), 3) == 0
    assert swamp.section_counts(c, line(0, E1), 3) == (8, [4])
    any_flag = line(-1, [1, 1])
    assert swamp.section_excess(config(), any_flag, 3, h1_vanishing=True) == swamp.slope_excess(config(), any_flag)
    with pytest.raises(H0Unavailable):
        swamp.section_excess(config(), any_flag, 3)


@pytest.mark.parametrize("split", [(0, 0), (2, -1), (-2, 1), (3, 3)])
def test_section_excess_matches_slope_for_large_twist(split):
    c = config(split=split, d=sum(split))
    n = max(-d for d in split)
    for f in swamp.enumerate_candidates(c):
        assert swamp.section_excess(c, f, n) == swamp.slope_excess(c, f)


def test_slope_bound_examples():
    assert swamp.slope_bound_C(F(1, 2), F(1, 2), 2, 2, 2) == 1
    assert swamp.slope_bound_C(F(1, 3), 0, 3, 5, 4) == F(3, 4)
    assert swamp.slope_bound_C(1, 1, 2, 2, 1) == 0


def test_is_critical():
    c = config()
    assert swamp.is_critical(c, F3, 0, 2)
    assert not swamp.is_critical(c, F1, 0, 2)
    assert swamp.is_critical(c, F3.scaled(3), 0, 2)


def test_admissible_deformation_example():
    s = DecorationForm.from_coefficients(STD, {(0, (0,)): 1, (0, (1,)): 1})
    c = config(s=s, split=(0, 0))
    df = swamp.admissible_deformation(c, line(0, E1))
    assert df.s == elementary_form(STD, (0,))
    assert df.split_degrees == (0, 0) and df.graded_pieces == ((1, 0), (1, 0))
    assert swamp.admissible_deformation(df, line(0, E1)) == df
    homogeneous = config(s=elementary_form(STD, (1,)))
    assert swamp.admissible_deformation(homogeneous, line(0, E1)).s == homogeneous.s


def test_deformation_drops_split_for_non_coordinate_flags():
    c = config(split=(0, 0))
    df = swamp.admissible_deformation(c, line(0, [1, 1]))
    assert df.split_degrees is None


@given(st.integers(0, 10 ** 6))
def test_deformation_properties(seed):
    rng = random.Random(seed)
    r = rng.randint(1, 3)
    flag = rand_numeric_flag(rng, r)
    sigma = TensorRepSpec(rng.randint(0, 3), rng.randint(1, 2), 0, r)
    rho = TensorRepSpec(rng.randint(0, 2), 1, 0, r)
    c = SwampConfig(r, 0, 0, 1, rho, sigma, rand_form(rng, rho), rand_form(rng, sigma, flag.x0_flag(r)))
    df = swamp.admissible_deformation(c, flag)
    assert swamp.mu_terms(df, flag) == swamp.mu_terms(c, flag)
    assert swamp.is_weight_homogeneous(df.s, flag.x0_flag(r))
    assert swamp.is_weight_homogeneous(df.phi, flag.generic_flag(r))
    assert swamp.admissible_deformation(df, flag) == df


def test_leading_component_two_splittings():
    flag = make_weighted_flag(3, [[[1, 1, 0]], [[1, 1, 0], [0, 1, 1]]], [1, 2])
    form = DecorationForm.from_coefficients(TensorRepSpec(2, 1, 0, 3), {(0, (0, 2)): 1, (0, (1, 1)): 3, (0, (2, 2)): -1})
    a = swamp.leading_component(form, flag)
    b = swamp.leading_component(form, flag, orthogonal_splitting(flag))
    assert mu_tensor(flag, a) == mu_tensor(flag, b) == mu_tensor(flag, form)
    for t in [(i, j) for i in (1, 2, 3) for j in (1, 2, 3)]:
        assert support_nonzero(a, flag, t) == support_nonzero(b, flag, t)
