"""The representation (V^{(x)a})^{(+)b} (x) det^{-c}, decorations on it, and weight computations.

Coordinates: copies and basis vectors are indexed from 0; a multi-index
``(i_1, ..., i_a)`` names e_{i_1} (x) ... (x) e_{i_a}. Stage tuples (which
flag member each tensor factor is restricted to) are 1-based, with stage
k+1 standing for the whole space.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from typing import Callable, Iterable, Mapping, Sequence

from . import linalg
from .errors import DimensionMismatch, LengthMismatch, NonAscendingChain, ZeroForm
from .flags import (
    Subspace,
    WeightedFlag,
    WeightVector,
    adapted_basis,
    gamma_from_flag,
    mu_linear,
)

Key = tuple[int, tuple[int, ...]]


@dataclass(frozen=True)
class TensorRepSpec:
    a: int
    b: int
    c: int
    base_dim: int

    def __post_init__(self):
        if self.a < 0 or self.b < 1 or self.base_dim < 1:
            raise DimensionMismatch(f"invalid representation data {self}")

    @property
    def degree(self) -> int:
        """Homogeneity degree a - c * dim V."""
        return self.a - self.c * self.base_dim

    @property
    def dim(self) -> int:
        return self.b * self.base_dim**self.a

    def flat_index(self, copy: int, idx: Sequence[int]) -> int:
        pos = 0
        for i in idx:
            pos = pos * self.base_dim + i
        return copy * self.base_dim**self.a + pos


@dataclass(frozen=True)
class DecorationForm:
    """A nonzero multilinear functional on V_{a,b,c} with sparse exact coefficients.

    ``factors`` optionally records a tensor-product decomposition (b = 1):
    the form equals factor_1 (x) factor_2 (x) ... on consecutive index blocks.
    It is only used to speed up support tests.
    """

    spec: TensorRepSpec
    items: tuple[tuple[Key, Fraction], ...]
    factors: tuple[DecorationForm, ...] = field(default=(), compare=False)

    def __post_init__(self):
        for (copy, idx), _ in self.items:
            if not 0 <= copy < self.spec.b:
                raise DimensionMismatch(f"copy index {copy} out of range")
            if len(idx) != self.spec.a or any(not 0 <= i < self.spec.base_dim for i in idx):
                raise DimensionMismatch(f"multi-index {idx} does not fit {self.spec}")
        if not self.items:
            raise ZeroForm("a decoration must have a nonzero coefficient")

    @classmethod
    def from_coefficients(cls, spec: TensorRepSpec, coefficients: Mapping[Key, object] | Iterable) -> DecorationForm:
        if isinstance(coefficients, Mapping):
            coefficients = coefficients.items()
        acc: dict[Key, Fraction] = defaultdict(Fraction)
        for (copy, idx), value in coefficients:
            acc[(int(copy), tuple(int(i) for i in idx))] += linalg.to_fraction(value)
        items = tuple(sorted((k, v) for k, v in acc.items() if v != 0))
        return cls(spec, items)

    @property
    def coefficients(self) -> dict[Key, Fraction]:
        return dict(self.items)

    def scaled(self, c) -> DecorationForm:
        c = linalg.to_fraction(c)
        if c == 0:
            raise ZeroForm("cannot scale a decoration by zero")
        return DecorationForm(self.spec, tuple((k, c * v) for k, v in self.items),
                              tuple(f.scaled(c) if i == 0 else f for i, f in enumerate(self.factors)))

    def as_functional(self) -> tuple[Fraction, ...]:
        out = [Fraction(0)] * self.spec.dim
        for (copy, idx), v in self.items:
            out[self.spec.flat_index(copy, idx)] = v
        return tuple(out)

    def evaluate(self, copy: int, vectors: Sequence[Sequence[Fraction]]) -> Fraction:
        total = Fraction(0)
        for (cp, idx), v in self.items:
            if cp != copy:
                continue
            term = v
            for vecr, i in zip(vectors, idx):
                term *= vecr[i]
                if not term:
                    break
            total += term
        return total


def elementary_form(spec: TensorRepSpec, idx: Sequence[int], copy: int = 0) -> DecorationForm:
    """The dual basis functional (e_{i_1} (x) ... (x) e_{i_a})^dual on one copy."""
    return DecorationForm.from_coefficients(spec, {(copy, tuple(idx)): 1})


def tensor_product(forms: Sequence[DecorationForm], c: int = 0) -> DecorationForm:
    if not forms:
        raise ZeroForm("empty tensor product")
    base = forms[0].spec.base_dim
    if any(f.spec.b != 1 or f.spec.base_dim != base for f in forms):
        raise DimensionMismatch("tensor factors must be single-copy forms on the same space")
    items: dict[tuple[int, ...], Fraction] = {(): Fraction(1)}
    for f in forms:
        nxt = {}
        for idx, v in items.items():
            for (_, jdx), w in f.items:
                nxt[idx + jdx] = v * w
        items = nxt
    spec = TensorRepSpec(sum(f.spec.a for f in forms), 1, c, base)
    flat = []
    for f in forms:
        flat.extend(f.factors or (f,))
    return DecorationForm(spec, tuple(sorted(((0, k), v) for k, v in items.items())), tuple(flat))


def form_nonzero_on(form: DecorationForm, subspaces: Sequence[Subspace]) -> bool:
    """Is the form nonzero on some copy of sub_1 (x) ... (x) sub_a?

    The restriction is computed by contracting each tensor slot against the
    echelon basis of its subspace; slots carrying the whole space are skipped.
    """
    if len(subspaces) != form.spec.a:
        raise LengthMismatch(f"expected {form.spec.a} subspaces, got {len(subspaces)}")
    if form.factors:
        pos = 0
        for f in form.factors:
            if not form_nonzero_on(f, subspaces[pos:pos + f.spec.a]):
                return False
            pos += f.spec.a
        return True
    current: dict[Key, Fraction] = dict(form.items)
    n = form.spec.base_dim
    for t, sub in enumerate(subspaces):
        if sub.dim == n:
            continue
        if sub.dim == 0:
            return False
        nxt: dict[Key, Fraction] = defaultdict(Fraction)
        for (copy, idx), v in current.items():
            col = idx[t]
            for p, row in enumerate(sub.basis):
                x = row[col]
                if x:
                    nxt[(copy, idx[:t] + (p,) + idx[t + 1:])] += v * x
        current = {k: v for k, v in nxt.items() if v}
        if not current:
            return False
    return bool(current)


def support_nonzero(form: DecorationForm, flag: WeightedFlag, stages: Sequence[int]) -> bool:
    if flag.ambient_dim != form.spec.base_dim:
        raise DimensionMismatch("flag and decoration live on different spaces")
    if len(stages) != form.spec.a:
        raise LengthMismatch(f"stage tuple of length {len(stages)} for a = {form.spec.a}")
    if any(not 1 <= s <= flag.length + 1 for s in stages):
        raise DimensionMismatch(f"stage tuple {tuple(stages)} out of range")
    return form_nonzero_on(form, [flag.stage(s) for s in stages])


def tuple_weight(stages: Sequence[int], gamma: WeightVector | Sequence[Fraction]) -> Fraction:
    """Weight of a basis tensor whose factors sit in the given eigen-stages."""
    values = gamma.values if isinstance(gamma, WeightVector) else tuple(gamma)
    if any(not 1 <= s <= len(values) for s in stages):
        raise LengthMismatch(f"stage tuple {tuple(stages)} does not fit {len(values)} weights")
    return sum((values[s - 1] for s in stages), Fraction(0))


def nu(j: int, stages: Sequence[int]) -> int:
    """Number of entries of the stage tuple that are <= j."""
    return sum(1 for s in stages if s <= j)


def flag_tuple_weight(dims: Sequence[int], weights: Sequence[Fraction], total_dim: int, a: int,
                      stages: Sequence[int]) -> Fraction:
    """sum_j alpha_j (a dim V_j - dim V nu_j(i))."""
    return sum((w * (a * d - total_dim * nu(j, stages))
                for j, (d, w) in enumerate(zip(dims, weights), start=1)), Fraction(0))


def minimal_supported_weight(n_stages: int, a: int, weight: Callable[[tuple[int, ...]], Fraction],
                             supported: Callable[[tuple[int, ...]], bool],
                             monotone: bool = True) -> tuple[Fraction, tuple[int, ...]] | None:
    """Least weight of a supported stage tuple, searched in ascending (weight, tuple) order.

    With ``monotone`` set, support is assumed to be an up-set for the
    componentwise order, so anything below a known unsupported tuple is skipped.
    """
    tuples = sorted(product(range(1, n_stages + 1), repeat=a), key=lambda t: (weight(t), t))
    dead: list[tuple[int, ...]] = []
    for t in tuples:
        if monotone and any(all(x <= y for x, y in zip(t, u)) for u in dead):
            continue
        if supported(t):
            return weight(t), t
        if monotone:
            dead.append(t)
    return None


def mu_tensor(flag: WeightedFlag, form: DecorationForm) -> Fraction:
    """Hilbert-Mumford weight of [form] for a weighted flag of the base space."""
    spec = form.spec
    if flag.ambient_dim != spec.base_dim:
        raise DimensionMismatch("flag and decoration live on different spaces")
    dims, weights = flag.dims, flag.weights
    stages_cache = {}

    def supported(t):
        if t not in stages_cache:
            stages_cache[t] = form_nonzero_on(form, [flag.stage(s) for s in t])
        return stages_cache[t]

    found = minimal_supported_weight(
        flag.length + 1, spec.a,
        lambda t: flag_tuple_weight(dims, weights, spec.base_dim, spec.a, t),
        supported,
    )
    if found is None:
        raise ZeroForm("the decoration vanishes identically")
    return -found[0]


def orthogonal_splitting(flag: WeightedFlag) -> list[Subspace]:
    """V^i = V_i intersected with the orthogonal complement of V_{i-1}."""
    pieces = []
    prev = Subspace.zero(flag.ambient_dim)
    for i in range(1, flag.length + 2):
        cur = flag.stage(i)
        pieces.append(cur & prev.annihilator())
        prev = cur
    return pieces


def integral_multiplier(weights: Iterable[Fraction]) -> int:
    m = 1
    for w in weights:
        m = math.lcm(m, Fraction(w).denominator)
    return m


def mu_bruteforce_oracle(flag: WeightedFlag, form: DecorationForm,
                         splitting: Sequence[Subspace] | None = None) -> Fraction:
    """Hilbert-Mumford weight from the full weight decomposition of V_{a,b,c}.

    Realizes an integral one-parameter subgroup for m * alpha on a splitting
    of the flag (orthogonal complements by default), evaluates the form on
    every basis tensor of every copy and takes the least weight met.
    """
    spec = form.spec
    if flag.ambient_dim != spec.base_dim:
        raise DimensionMismatch("flag and decoration live on different spaces")
    m = integral_multiplier(flag.weights)
    gamma = gamma_from_flag(flag.scaled(m))
    int_gamma = [int(g) for g in gamma.values]
    assert all(g == ig for g, ig in zip(gamma.values, int_gamma))
    pieces = splitting if splitting is not None else orthogonal_splitting(flag)
    basis, weights = [], []
    for g, piece in zip(int_gamma, pieces):
        for row in piece.basis:
            basis.append(row)
            weights.append(g)
    if len(basis) != spec.base_dim:
        raise DimensionMismatch("splitting does not give a basis")
    det_weight = -spec.c * sum(g * mult for g, mult in zip(int_gamma, gamma.multiplicities))
    best = None
    for copy in range(spec.b):
        for p in product(range(len(basis)), repeat=spec.a):
            w = sum(weights[i] for i in p) + det_weight
            if best is not None and w >= best:
                continue
            if form.evaluate(copy, [basis[i] for i in p]) != 0:
                best = w
    if best is None:
        raise ZeroForm("the decoration vanishes identically")
    return Fraction(-best, m)


def induced_flag(flag: WeightedFlag, spec: TensorRepSpec) -> WeightedFlag:
    """Weighted flag of V_{a,b,c} induced by a weighted flag of V."""
    if flag.ambient_dim != spec.base_dim:
        raise DimensionMismatch("flag and representation disagree on dim V")
    N = spec.dim
    if flag.length == 0:
        return WeightedFlag(N, (), ())
    m = integral_multiplier(flag.weights)
    gamma = gamma_from_flag(flag.scaled(m)).values
    basis, stages = adapted_basis(flag.subspaces, flag.ambient_dim)
    n = spec.base_dim
    by_weight: dict[Fraction, list[tuple[Fraction, ...]]] = defaultdict(list)
    for copy in range(spec.b):
        for p in product(range(n), repeat=spec.a):
            w = sum((gamma[stages[i] - 1] for i in p), Fraction(0))
            v = [Fraction(0)] * N
            for idx in product(range(n), repeat=spec.a):
                x = Fraction(1)
                for i, j in zip(p, idx):
                    x *= basis[i][j]
                    if not x:
                        break
                if x:
                    v[spec.flat_index(copy, idx)] = x
            by_weight[w].append(tuple(v))
    levels = sorted(by_weight)
    subs, betas, acc = [], [], []
    for h, w in enumerate(levels[:-1]):
        acc.extend(by_weight[w])
        subs.append(Subspace.span(acc, N))
        betas.append((levels[h + 1] - w) / N / m)
    return WeightedFlag(N, tuple(subs), tuple(betas))


def mu_via_induced_flag(flag: WeightedFlag, form: DecorationForm) -> Fraction:
    return mu_linear(induced_flag(flag, form.spec), form.as_functional())


def alternating_form(functionals: Sequence[Sequence[Fraction]], base_dim: int) -> DecorationForm:
    """(v_1, ..., v_p) -> det[g_s(v_t)], the full antisymmetrization of g_1 (x) ... (x) g_p."""
    p = len(functionals)
    spec = TensorRepSpec(p, 1, 0, base_dim)
    coeffs = {}
    for idx in permutations(range(base_dim), p):
        d = linalg.det([[g[i] for i in idx] for g in functionals])
        if d:
            coeffs[(0, idx)] = d
    return DecorationForm.from_coefficients(spec, coeffs)


def plucker_form(chain: Sequence[Subspace], multiplicities: Sequence[int]) -> DecorationForm:
    """Decoration of a partial flag U_1 < ... < U_k: tensor product of the quotient determinants.

    The factor for U_j is the top wedge of V -> V/U_j, written through a basis
    of the annihilator of U_j, and it is repeated ``multiplicities[j]`` times.
    """
    if not chain:
        raise NonAscendingChain("a parabolic flag needs at least one member")
    if len(chain) != len(multiplicities):
        raise DimensionMismatch("one multiplicity per flag member is required")
    r = chain[0].ambient_dim
    prev = Subspace.zero(r)
    for u in chain:
        if not (prev.dim < u.dim < r) or not prev.issubspace(u):
            raise NonAscendingChain("parabolic flag must be strictly ascending and proper")
        prev = u
    factors = []
    for u, beta in zip(chain, multiplicities):
        if beta < 1:
            raise DimensionMismatch("multiplicities must be positive integers")
        pi = alternating_form(u.annihilator().basis, r)
        factors.extend([pi] * beta)
    return tensor_product(factors)
