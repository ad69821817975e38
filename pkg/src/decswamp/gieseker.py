"""Weights on the Gieseker space, its linearization, and the flag transports between E and Y.

Y stands for the section space H^0(E(n)) of dimension p(n). Weighted flags
of Y are described by :class:`SectionFlag`; supports of the two decoration
points T_1, T_2 are supplied as predicates on stage tuples.

:class:`SplitGiesekerModel` realizes everything explicitly for a split
bundle on the projective line, where Y has a monomial basis.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Collection, Sequence

from . import linalg
from .errors import (
    DimensionMismatch,
    EmptySupport,
    InconsistentH0,
    NoSplitModel,
    NonAscendingChain,
    NonPositiveEta,
    NonPositiveWeight,
)
from .flags import Subspace
from .swamp import NumericFlag, SwampConfig, h0_split, section_functional
from .tensor import flag_tuple_weight, form_nonzero_on, minimal_supported_weight

Support = Callable[[tuple[int, ...]], bool]


def euler_p(n: int, d: int, r: int, g: int) -> int:
    return d + r * (n + 1 - g)


@dataclass(frozen=True)
class Linearization:
    z: int
    eta: int
    theta1: int
    theta2: int


def make_linearization(p_n: int, delta1, delta2, a1: int, a2: int, r: int) -> Linearization:
    """Least z making (eta, theta1, theta2) integral; zero thetas are allowed for zero deltas."""
    delta1, delta2 = linalg.to_fraction(delta1), linalg.to_fraction(delta2)
    if delta1 < 0 or delta2 < 0:
        raise NonPositiveWeight("stability parameters must be non-negative")
    eta = p_n - a1 * delta1 - a2 * delta2
    if eta <= 0:
        raise NonPositiveEta(f"p(n) - a1 d1 - a2 d2 = {eta} is not positive")
    targets = (eta, r * delta1, r * delta2)
    z = 1
    for t in targets:
        z = math.lcm(z, t.denominator)
    return Linearization(z, int(z * eta), int(z * targets[1]), int(z * targets[2]))


@dataclass(frozen=True)
class SectionFlag:
    """Weighted flag 0 < Y_1 < ... < Y_k < Y with the ranks of the generated subsheaves F_j.

    ``members`` optionally names the subspaces concretely (monomial sets in
    the split model); it participates in equality.
    """

    p_n: int
    dims: tuple[int, ...]
    weights: tuple[Fraction, ...]
    ranks: tuple[int, ...]
    members: tuple[frozenset, ...] | None = None

    def __post_init__(self):
        k = len(self.dims)
        if len(self.weights) != k or len(self.ranks) != k:
            raise DimensionMismatch("dims, weights and ranks must have the same length")
        if self.members is not None and [len(m) for m in self.members] != list(self.dims):
            raise DimensionMismatch("member sizes differ from dims")
        prev = 0
        for d in self.dims:
            if not prev < d < self.p_n:
                raise NonAscendingChain("section flag dims must be strictly ascending and proper")
            prev = d
        if any(w <= 0 for w in self.weights):
            raise NonPositiveWeight("flag weights must be positive")
        if any(b < a for a, b in zip(self.ranks, self.ranks[1:])) or any(x < 0 for x in self.ranks):
            raise DimensionMismatch("generated ranks must be non-negative and ascending")

    @property
    def length(self) -> int:
        return len(self.dims)


def gies_weight_quot(flag: SectionFlag, r: int) -> Fraction:
    return sum((a * (flag.p_n * rk - r * d) for a, rk, d in zip(flag.weights, flag.ranks, flag.dims)),
               Fraction(0))


def _as_predicate(support) -> Support:
    if callable(support):
        return support
    allowed = {tuple(t) for t in support}
    return lambda t: t in allowed


def gies_weight_tensor(flag: SectionFlag, support: Support | Collection[tuple[int, ...]], a_m: int) -> Fraction:
    """-min over supported tuples of sum_j alpha_j (a_m dim Y_j - p(n) nu_j(i)).

    The predicate is taken as given, so no monotone pruning is applied.
    """
    pred = _as_predicate(support)
    found = minimal_supported_weight(
        flag.length + 1, a_m,
        lambda t: flag_tuple_weight(flag.dims, flag.weights, flag.p_n, a_m, t),
        pred, monotone=False,
    )
    if found is None:
        raise EmptySupport("no stage tuple is supported")
    return -found[0]


def t2_bounds(flag: SectionFlag, a_m: int) -> tuple[Fraction, Fraction]:
    lo = -a_m * sum((a * d for a, d in zip(flag.weights, flag.dims)), Fraction(0))
    hi = a_m * sum((a * (flag.p_n - d) for a, d in zip(flag.weights, flag.dims)), Fraction(0))
    return lo, hi


def total_gies_weight(lin: Linearization, w_m, w_t1, w_t2) -> Fraction:
    return lin.eta * linalg.to_fraction(w_m) + lin.theta1 * linalg.to_fraction(w_t1) \
        + lin.theta2 * linalg.to_fraction(w_t2)


def transport_gamma(eflag: NumericFlag, h0_data: Sequence[int], h0_total: int) -> SectionFlag:
    """Gamma: Y_h runs over the distinct proper nonzero section spaces H^0(E_j(n)); beta_h sums alpha over J(h).

    The generated rank recorded for Y_h is rk E_{j(h)} with j(h) = min J(h).
    """
    if len(h0_data) != eflag.length:
        raise InconsistentH0("one h^0 value per flag step is required")
    prev = 0
    for h in h0_data:
        if h < prev or h > h0_total:
            raise InconsistentH0("h^0 values must ascend and stay within h^0(E(n))")
        prev = h
    dims, weights, ranks = [], [], []
    for j, h in enumerate(h0_data):
        if h == 0 or h == h0_total:
            continue
        if dims and dims[-1] == h:
            weights[-1] += eflag.weights[j]
        else:
            dims.append(h)
            weights.append(eflag.weights[j])
            ranks.append(eflag.ranks[j])
    return SectionFlag(h0_total, tuple(dims), tuple(weights), tuple(ranks))


@dataclass(frozen=True)
class GeneratedStep:
    """What Y_h generates: the saturation E'_h (rank, degree, fibers) and whether h^1(F_h(n)) = 0."""

    rank: int
    degree: int
    h1_vanishing: bool
    generic: Subspace
    x0: Subspace | None = None


def transport_q(yflag: SectionFlag, generated: Sequence[GeneratedStep], r: int) -> NumericFlag:
    """Q: the distinct proper saturations E'_h with h^1(F_h(n)) = 0; alpha_j sums beta over H(j)."""
    if len(generated) != yflag.length:
        raise DimensionMismatch("one generated step per Y-step is required")
    degrees, weights, gen, x0 = [], [], [], []
    for beta, step in zip(yflag.weights, generated):
        if not step.h1_vanishing or step.rank in (0, r):
            continue
        sub_x0 = step.x0 if step.x0 is not None else step.generic
        if gen and gen[-1] == step.generic:
            weights[-1] += beta
            continue
        if gen and gen[-1].dim >= step.rank:
            raise NonAscendingChain("generated subbundles must ascend")
        degrees.append(step.degree)
        weights.append(beta)
        gen.append(step.generic)
        x0.append(sub_x0)
    return NumericFlag(tuple(degrees), tuple(weights), tuple(gen), tuple(x0))


@dataclass(frozen=True)
class Comparison:
    """Both sides of a Gieseker/section comparison plus the equality-case diagnostics."""

    gies: Fraction
    section: Fraction
    holds: bool
    equal: bool
    same_length: bool
    generically_generated: bool
    torsion_free: bool


Monomial = tuple[int, int]


class SplitGiesekerModel:
    """O(d_1) + ... + O(d_r) on the projective line, twisted by n, with x0 = [0:1].

    Y has the basis (i, k), k = 0..d_i + n, standing for s^k t^(d_i+n-k) in
    the i-th summand. At x0 only k = 0 survives; at the generic point every
    monomial is nonzero.
    """

    def __init__(self, config: SwampConfig, n: int):
        if config.split_degrees is None:
            raise NoSplitModel("the Gieseker model needs split degrees")
        self.config = config
        self.n = n
        self.m = tuple(d + n for d in config.split_degrees)
        if any(m < 0 for m in self.m):
            raise DimensionMismatch("every summand must be globally generated after the twist")
        self.basis: tuple[Monomial, ...] = tuple((i, k) for i, m in enumerate(self.m) for k in range(m + 1))
        self.p = len(self.basis)
        assert self.p == euler_p(n, config.d, config.r, config.g) == h0_split(config.split_degrees, n)

    def full_sections(self, members: Collection[int]) -> frozenset:
        return frozenset((i, k) for i in members for k in range(self.m[i] + 1))

    def generated(self, member: frozenset) -> GeneratedStep:
        r, split = self.config.r, self.config.split_degrees
        rows = sorted({i for i, _ in member})
        sat = Subspace.coordinate(r, rows)
        # F_h(n) is a sum of O(max K - min K), so h^1 always vanishes on the line
        return GeneratedStep(len(rows), sum(split[i] for i in rows), True, sat, sat)

    def torsion(self, member: frozenset) -> int:
        total = 0
        for i in {i for i, _ in member}:
            ks = [k for j, k in member if j == i]
            total += min(ks) + self.m[i] - max(ks)
        return total

    def h0_generated(self, member: frozenset) -> int:
        """h^0(F_h(n)) for the subsheaf generated by a monomial set."""
        total = 0
        for i in {i for i, _ in member}:
            ks = [k for j, k in member if j == i]
            total += max(ks) - min(ks) + 1
        return total

    def _image(self, member: frozenset | None, at_x0: bool) -> Subspace:
        r = self.config.r
        if member is None:
            return Subspace.full(r)
        return Subspace.coordinate(r, {i for i, k in member if not at_x0 or k == 0})

    def support(self, yflag: SectionFlag, which: int) -> Support:
        """T_1 (which=1) or T_2 (which=2) restricted to Y_{i_1} x ... is nonzero."""
        form = self.config.phi if which == 1 else self.config.s
        members = yflag.members
        if members is None:
            raise DimensionMismatch("the split model needs concrete Y-members")
        images = [self._image(m, which == 2) for m in members] + [self._image(None, which == 2)]
        cache: dict[tuple[int, ...], bool] = {}

        def pred(t):
            if t not in cache:
                cache[t] = form_nonzero_on(form, [images[h - 1] for h in t])
            return cache[t]
        return pred

    def section_flag(self, members: Sequence[frozenset], weights: Sequence) -> SectionFlag:
        ranks = tuple(len({i for i, _ in m}) for m in members)
        return SectionFlag(self.p, tuple(len(m) for m in members), tuple(linalg.to_fraction(w) for w in weights),
                           ranks, tuple(frozenset(m) for m in members))

    def weights(self, yflag: SectionFlag, delta1, delta2) -> tuple[Linearization, Fraction, Fraction, Fraction]:
        cfg = self.config
        lin = make_linearization(self.p, delta1, delta2, cfg.a1, cfg.a2, cfg.r)
        w_m = gies_weight_quot(yflag, cfg.r)
        w_t1 = gies_weight_tensor(yflag, self.support(yflag, 1), cfg.a1)
        w_t2 = gies_weight_tensor(yflag, self.support(yflag, 2), cfg.a2)
        return lin, w_m, w_t1, w_t2

    def normalized_weight(self, yflag: SectionFlag, delta1, delta2) -> Fraction:
        """mu(lambda, gies_n(p)) / (z p(n))."""
        lin, w_m, w_t1, w_t2 = self.weights(yflag, delta1, delta2)
        return total_gies_weight(lin, w_m, w_t1, w_t2) / (lin.z * self.p)

    def gamma(self, eflag: NumericFlag) -> SectionFlag:
        """Gamma for a flag of coordinate sub-sums, with concrete monomial members."""
        chosen = []
        for sub in eflag.generic:
            idx = sub.coordinate_support()
            if idx is None:
                raise DimensionMismatch("the split model transports coordinate sub-sums only")
            chosen.append(self.full_sections(idx))
        h0 = [len(c) for c in chosen]
        bare = transport_gamma(eflag, h0, self.p)
        members = []
        for d in bare.dims:
            members.append(next(c for c in chosen if len(c) == d))
        return SectionFlag(bare.p_n, bare.dims, bare.weights, bare.ranks, tuple(members))

    def q(self, yflag: SectionFlag) -> NumericFlag:
        if yflag.members is None:
            raise DimensionMismatch("the split model needs concrete Y-members")
        return transport_q(yflag, [self.generated(m) for m in yflag.members], self.config.r)

    def compare_gamma(self, eflag: NumericFlag, delta1, delta2) -> Comparison:
        """Gieseker weight of Gamma(E_., alpha) against the section functional; expect <=."""
        yflag = self.gamma(eflag)
        lhs = self.normalized_weight(yflag, delta1, delta2)
        rhs = section_functional(self.config, eflag, delta1, delta2, self.n)
        gen = all(rk == e for rk, e in zip(yflag.ranks, eflag.ranks))
        return Comparison(lhs, rhs, lhs <= rhs, lhs == rhs, yflag.length == eflag.length, gen, True)

    def compare_q(self, yflag: SectionFlag, delta1, delta2) -> Comparison:
        """Gieseker weight of (Y_., beta) against the section functional of Q(Y_., beta); expect >=."""
        eflag = self.q(yflag)
        lhs = self.normalized_weight(yflag, delta1, delta2)
        rhs = section_functional(self.config, eflag, delta1, delta2, self.n)
        torsion_free = all(self.torsion(m) == 0 for m in yflag.members)
        full = all(len(m) == h0_split([self.config.split_degrees[i] for i in {i for i, _ in m}], self.n)
                   for m in yflag.members)
        return Comparison(lhs, rhs, lhs >= rhs, lhs == rhs, yflag.length == eflag.length, full, torsion_free)

    def random_yflag(self, rng, max_length: int = 3) -> SectionFlag:
        """Ascending monomial flag: prefixes of a random ordering of the basis."""
        order = list(self.basis)
        rng.shuffle(order)
        k = rng.randint(1, min(max_length, self.p - 1))
        cuts = sorted(rng.sample(range(1, self.p), k))
        members = [frozenset(order[:c]) for c in cuts]
        weights = [Fraction(rng.randint(1, 4), rng.randint(1, 3)) for _ in cuts]
        return self.section_flag(members, weights)


def all_monomial_flags(model: SplitGiesekerModel, max_length: int = 1):
    """Every ascending chain of monomial sets up to the given length, unit weights (small p only)."""
    basis = model.basis
    subsets = []
    for mask in range(1, 2 ** model.p - 1):
        subsets.append(frozenset(b for i, b in enumerate(basis) if mask >> i & 1))
    subsets.sort(key=lambda s: (len(s), sorted(s)))

    def extend(chain):
        if chain:
            yield chain
        if len(chain) == max_length:
            return
        for s in subsets:
            if not chain or (chain[-1] < s):
                yield from extend(chain + [s])
    for chain in extend([]):
        yield model.section_flag(chain, [1] * len(chain))
