from __future__ import annotations

from fractions import Fraction as F
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from decswamp.errors import LengthMismatch, NonAscendingChain, ZeroForm
from decswamp.flags import Subspace, make_weighted_flag
from decswamp.tensor import (
    DecorationForm,
    TensorRepSpec,
    elementary_form,
    induced_flag,
    minimal_supported_weight,
    mu_bruteforce_oracle,
    mu_tensor,
    mu_via_induced_flag,
    plucker_form,
    support_nonzero,
    tensor_product,
    tuple_weight,
)
from strategies import flag_and_form, flags, positive_q

E1, E2 = [1, 0], [0, 1]
FLAG = make_weighted_flag(2, [[E1]], [1])
HALF = make_weighted_flag(2, [[E1]], [F(1, 2)])
SQ = TensorRepSpec(2, 1, 0, 2)


def test_tuple_weight_examples():
    assert tuple_weight((1, 1), (F(-1), F(1))) == -2
    assert tuple_weight((1, 2), (F(-1), F(1))) == 0
    assert tuple_weight((), (F(-1), F(1))) == 0
    with pytest.raises(LengthMismatch):
        tuple_weight((3,), (F(-1), F(1)))


def test_support_examples():
    e11 = elementary_form(SQ, (0, 0))
    e22 = elementary_form(SQ, (1, 1))
    assert support_nonzero(e11, FLAG, (1, 1))
    assert support_nonzero(e11, FLAG, (2, 2))
    assert not support_nonzero(e22, FLAG, (1, 1))


def test_mu_tensor_examples():
    e11 = elementary_form(SQ, (0, 0))
    assert mu_tensor(FLAG, e11) == 2
    assert mu_bruteforce_oracle(FLAG, e11) == 2
    lin = elementary_form(TensorRepSpec(1, 1, 0, 2), (1,))
    assert mu_tensor(HALF, lin) == F(-1, 2)
    assert mu_tensor(FLAG.scaled(2), e11) == 4


def test_a_zero_forms_weigh_zero():
    form = DecorationForm.from_coefficients(TensorRepSpec(0, 2, 1, 2), {(1, ()): 5})
    assert mu_tensor(FLAG, form) == 0 == mu_bruteforce_oracle(FLAG, form)


def test_zero_form_rejected():
    with pytest.raises(ZeroForm):
        DecorationForm.from_coefficients(SQ, {(0, (0, 0)): 0})


def test_induced_flag_example():
    ind = induced_flag(HALF, SQ)
    assert ind.ambient_dim == 4 and ind.dims == (1, 3) and ind.weights == (F(1, 4), F(1, 4))
    assert induced_flag(make_weighted_flag(2, [], []), SQ).length == 0


def test_plucker_examples():
    u = Subspace.span([E1], 2)
    form = plucker_form([u], [1])
    assert form.coefficients == {(0, (1,)): 1}
    assert mu_tensor(FLAG, form) == -1
    assert mu_tensor(make_weighted_flag(2, [[E2]], [1]), form) == 1
    with pytest.raises(NonAscendingChain):
        plucker_form([Subspace.full(2)], [1])


def test_plucker_two_step_vanishes_on_flag():
    chain = [Subspace.span([[1, 0, 0]], 3), Subspace.span([[1, 0, 0], [0, 1, 0]], 3)]
    form = plucker_form(chain, [1, 2])
    assert form.spec.a == 2 + 2 * 1
    for t in product(range(3), repeat=form.spec.a):
        vecs = [[1 if i == j else 0 for i in range(3)] for j in t]
        if t[0] == 0 or t[1] == 0 or 0 in t[2:] or 1 in t[2:]:
            assert form.evaluate(0, vecs) == 0


def test_minimal_supported_weight_pruning_matches_exhaustive():
    weight = lambda t: F(sum(t) * (-1) ** len(t))
    supported = lambda t: t[0] >= 2
    assert minimal_supported_weight(3, 2, weight, supported) == minimal_supported_weight(3, 2, weight, supported, False)
    assert minimal_supported_weight(2, 1, weight, lambda t: False) is None


@given(flag_and_form(max_a=3))
def test_mu_tensor_matches_oracle(pair):
    flag, form = pair
    assert mu_tensor(flag, form) == mu_bruteforce_oracle(flag, form)


@given(flag_and_form(max_a=2))
def test_induced_route_matches(pair):
    flag, form = pair
    assert mu_via_induced_flag(flag, form) == mu_tensor(flag, form)


@given(flag_and_form(), positive_q, st.integers(-3, 3).filter(bool))
def test_homogeneity(pair, m, c):
    flag, form = pair
    value = mu_tensor(flag, form)
    assert mu_tensor(flag.scaled(m), form) == m * value
    assert mu_tensor(flag, form.scaled(c)) == value


@given(flag_and_form(), st.data())
def test_support_is_monotone(pair, data):
    flag, form = pair
    k = flag.length + 1
    t = tuple(data.draw(st.integers(1, k)) for _ in range(form.spec.a))
    u = tuple(data.draw(st.integers(x, k)) for x in t)
    if support_nonzero(form, flag, t):
        assert support_nonzero(form, flag, u)


@given(flag_and_form(), st.data())
def test_weight_shift_estimate(pair, data):
    flag, form = pair
    beta = [data.draw(positive_q) for _ in flag.weights]
    shifted = flag.with_weights([a + b for a, b in zip(flag.weights, beta)])
    bound = mu_tensor(flag, form) - form.spec.a * sum(b * d for b, d in zip(beta, flag.dims))
    assert mu_tensor(shifted, form) >= bound


@given(flags(n=2, min_len=1))
def test_tensor_product_weights_add(f1):
    a = DecorationForm.from_coefficients(TensorRepSpec(1, 1, 0, 2), {(0, (0,)): 1, (0, (1,)): 2})
    b = DecorationForm.from_coefficients(TensorRepSpec(1, 1, 0, 2), {(0, (1,)): 1})
    prod = tensor_product([a, b])
    plain = DecorationForm(prod.spec, prod.items)
    assert mu_tensor(f1, prod) == mu_tensor(f1, plain) == mu_tensor(f1, a) + mu_tensor(f1, b)
