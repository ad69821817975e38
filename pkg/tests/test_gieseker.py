from __future__ import annotations

import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from decswamp import gieseker as gs
from decswamp import swamp
from decswamp.errors import EmptySupport, InconsistentH0, NonPositiveEta
from decswamp.flags import Subspace
from decswamp.selfcheck import positive_twist, rand_split_config
from decswamp.swamp import SwampConfig, make_numeric_flag
from decswamp.tensor import DecorationForm, TensorRepSpec, elementary_form


def test_euler_p():
    assert gs.euler_p(3, 0, 2, 0) == 8
    assert gs.euler_p(1, 0, 2, 2) == 0
    assert gs.euler_p(4, 0, 2, 0) > gs.euler_p(3, 0, 2, 0)


def test_linearization_examples():
    assert gs.make_linearization(10, F(1, 2), F(1, 3), 1, 1, 2) == gs.Linearization(6, 55, 6, 4)
    assert gs.make_linearization(10, 1, 2, 1, 1, 2).z == 1
    with pytest.raises(NonPositiveEta):
        gs.make_linearization(10, F(1, 2), F(19, 2), 1, 1, 2)


def test_weight_examples():
    one = gs.SectionFlag(8, (3,), (F(1),), (1,))
    assert gs.gies_weight_quot(one, 2) == 2
    assert gs.gies_weight_quot(gs.SectionFlag(8, (4,), (F(1),), (1,)), 2) == 0
    assert gs.gies_weight_tensor(one, {(1,), (2,)}, 1) == 5
    assert gs.gies_weight_tensor(one, {(2,)}, 1) == -3
    with pytest.raises(EmptySupport):
        gs.gies_weight_tensor(one, set(), 1)
    assert gs.total_gies_weight(gs.Linearization(1, 55, 6, 4), 0, 0, 0) == 0
    assert gs.total_gies_weight(gs.Linearization(1, 1, 1, 1), 1, 2, 3) == 6
    assert gs.total_gies_weight(gs.Linearization(1, 2, 3, 4), -1, -2, -3) == -20


def test_t2_bounds_example():
    flag = gs.SectionFlag(8, (3,), (F(1),), (1,))
    lo, hi = gs.t2_bounds(flag, 1)
    assert (lo, hi) == (-3, 5)


def _e(deg, idx, weight=1, r=2):
    sub = Subspace.coordinate(r, idx)
    return swamp.NumericFlag((deg,), (F(weight),), (sub,), (sub,))


def test_transport_gamma_examples():
    y = gs.transport_gamma(_e(0, [0]), [3], 8)
    assert (y.dims, y.weights, y.ranks) == ((3,), (1,), (1,))
    two = make_numeric_flag(3, [0, 0], [1, 2], [[[1, 0, 0]], [[1, 0, 0], [0, 1, 0]]])
    merged = gs.transport_gamma(two, [3, 3], 9)
    assert merged.dims == (3,) and merged.weights == (3,)
    trivial = gs.transport_gamma(_e(-5, [0]), [0], 8)
    assert trivial.length == 0 and trivial.weights == ()
    with pytest.raises(InconsistentH0):
        gs.transport_gamma(two, [4, 3], 9)


def test_transport_q_examples():
    sub = Subspace.coordinate(2, [0])
    y = gs.SectionFlag(8, (3,), (F(2),), (1,))
    e = gs.transport_q(y, [gs.GeneratedStep(1, 0, True, sub)], 2)
    assert e.ranks == (1,) and e.weights == (2,)
    y2 = gs.SectionFlag(8, (2, 3), (F(1), F(1)), (1, 1))
    e2 = gs.transport_q(y2, [gs.GeneratedStep(1, 0, True, sub)] * 2, 2)
    assert e2.length == 1 and e2.weights == (2,)
    e3 = gs.transport_q(y2, [gs.GeneratedStep(1, 0, False, sub)] * 2, 2)
    assert e3.length == 0


def _model():
    r = 2
    triv = TensorRepSpec(0, 1, 0, r)
    sigma = TensorRepSpec(2, 1, 0, r)
    cfg = SwampConfig(r, 0, 0, 0, triv, sigma, DecorationForm.from_coefficients(triv, {(0, ()): 1}),
                      elementary_form(sigma, (0, 1)), (0, 0))
    return gs.SplitGiesekerModel(cfg, 2)


def test_split_model_critical_flags_roundtrip():
    model = _model()
    assert model.p == 6
    for e in swamp.enumerate_candidates(model.config):
        cmp = model.compare_gamma(e, 0, F(1, 3))
        assert cmp.equal and cmp.gies == 0
        y = model.gamma(e)
        assert model.q(y) == e and model.gamma(model.q(y)) == y


def test_split_model_direction_two_exhaustive_small():
    model = _model()
    for y in gs.all_monomial_flags(model, 1):
        assert model.compare_q(y, 0, F(1, 3)).holds


@given(st.integers(0, 10 ** 6))
def test_split_model_both_directions(seed):
    rng = random.Random(seed)
    cfg, n = rand_split_config(rng, rng.choice((2, 3)), designed=rng.random() < 0.5)
    d1 = F(rng.randint(0, 3), rng.randint(1, 3))
    d2 = F(1, cfg.a2 + rng.randint(1, 3))
    model = gs.SplitGiesekerModel(cfg, positive_twist(cfg, n, d1, d2))
    for e in swamp.enumerate_candidates(cfg):
        assert model.compare_gamma(e, d1, d2).holds
    for _ in range(4):
        assert model.compare_q(model.random_yflag(rng), d1, d2).holds


def test_torsion_and_generation_diagnostics():
    model = _model()
    y = model.section_flag([frozenset({(0, 1)})], [1])
    cmp = model.compare_q(y, 0, F(1, 3))
    assert not cmp.torsion_free and not cmp.generically_generated
    assert model.torsion(frozenset({(0, 1)})) == 2
    assert model.h0_generated(frozenset({(0, 0), (0, 2)})) == 3
