"""Decorated swamps at fiber level: the stability functional, walls and admissible deformation.

A swamp is modeled by its numeric invariants, a decoration ``phi`` on the
generic fiber and a decoration ``s`` on the fiber at the marked point. Test
objects are :class:`NumericFlag` s carrying ranks, degrees, weights and the
restriction of the filtration to both fibers.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

from . import linalg
from .errors import (
    DimensionMismatch,
    EmptyCandidates,
    H0Unavailable,
    NoSplitModel,
    NonPositiveWeight,
    UnrealizableDegree,
    ZeroForm,
)
from .flags import Subspace, WeightedFlag, adapted_basis, gamma_from_flag
from .tensor import DecorationForm, TensorRepSpec, mu_tensor

STABLE = "stable"
SEMISTABLE = "semistable-not-stable"
UNSTABLE = "unstable"
INCONCLUSIVE = "inconclusive"
VERDICTS = (STABLE, SEMISTABLE, UNSTABLE, INCONCLUSIVE)


@dataclass(frozen=True)
class NumericFlag:
    """Weighted filtration 0 < E_1 < ... < E_k < E seen through ranks, degrees and two fibers."""

    degrees: tuple[int, ...]
    weights: tuple[Fraction, ...]
    generic: tuple[Subspace, ...]
    x0: tuple[Subspace, ...]

    def __post_init__(self):
        k = len(self.degrees)
        if not (len(self.weights) == len(self.generic) == len(self.x0) == k):
            raise DimensionMismatch("degrees, weights and both chains must have the same length")
        if [s.dim for s in self.generic] != [s.dim for s in self.x0]:
            raise DimensionMismatch("generic and x0 chains must share the rank vector")
        if any(w <= 0 for w in self.weights):
            raise NonPositiveWeight("flag weights must be positive")

    @property
    def length(self) -> int:
        return len(self.degrees)

    @property
    def ranks(self) -> tuple[int, ...]:
        return tuple(s.dim for s in self.generic)

    def generic_flag(self, r: int) -> WeightedFlag:
        return WeightedFlag(r, self.generic, self.weights)

    def x0_flag(self, r: int) -> WeightedFlag:
        return WeightedFlag(r, self.x0, self.weights)

    def scaled(self, m) -> NumericFlag:
        m = linalg.to_fraction(m)
        return replace(self, weights=tuple(m * w for w in self.weights))


def make_numeric_flag(r: int, degrees: Sequence[int], weights: Sequence, generic: Sequence,
                      x0: Sequence | None = None) -> NumericFlag:
    """Build a flag; members may be Subspace objects or lists of spanning vectors.

    The x0 chain defaults to the generic chain.
    """
    def subs(chain):
        return tuple(s if isinstance(s, Subspace) else Subspace.span(s, r) for s in chain)

    gen = subs(generic)
    flag = NumericFlag(tuple(int(d) for d in degrees), tuple(linalg.to_fraction(w) for w in weights),
                       gen, subs(x0) if x0 is not None else gen)
    flag.generic_flag(r)
    flag.x0_flag(r)
    return flag


@dataclass(frozen=True)
class SwampConfig:
    r: int
    d: int
    l: int
    g: int
    rho: TensorRepSpec
    sigma: TensorRepSpec
    phi: DecorationForm
    s: DecorationForm
    split_degrees: tuple[int, ...] | None = None
    graded_pieces: tuple[tuple[int, int], ...] | None = None

    def __post_init__(self):
        if self.rho.base_dim != self.r or self.sigma.base_dim != self.r:
            raise DimensionMismatch("representations must be built on dim V = rank")
        if self.phi.spec != self.rho or self.s.spec != self.sigma:
            raise DimensionMismatch("decorations must live on the declared representations")
        if self.split_degrees is not None:
            if len(self.split_degrees) != self.r or sum(self.split_degrees) != self.d:
                raise DimensionMismatch("split degrees must be r integers summing to d")
            if self.g != 0:
                raise DimensionMismatch("the split model lives on genus 0")

    @property
    def a1(self) -> int:
        return self.rho.a

    @property
    def a2(self) -> int:
        return self.sigma.a


@dataclass
class StabilityReport:
    verdict: str
    witness: NumericFlag | None
    values: list[tuple[NumericFlag, Fraction]]
    scope: str = "supplied"
    non_coordinate: int = 0
    notes: list[str] = field(default_factory=list)


def slope_excess(config: SwampConfig, flag: NumericFlag) -> Fraction:
    """M = sum_j alpha_j (deg E rk E_j - deg E_j rk E)."""
    return sum((a * (config.d * rk - dj * config.r)
                for a, rk, dj in zip(flag.weights, flag.ranks, flag.degrees)), Fraction(0))


def _check_realizable(config: SwampConfig, flag: NumericFlag) -> None:
    if config.split_degrees is None:
        return
    ordered = sorted(config.split_degrees, reverse=True)
    for rk, dj in zip(flag.ranks, flag.degrees):
        if dj > sum(ordered[:rk]):
            raise UnrealizableDegree(f"no rank {rk} subbundle of degree {dj} in the split model")


def mu_terms(config: SwampConfig, flag: NumericFlag) -> tuple[Fraction, Fraction]:
    mu1 = mu_tensor(flag.generic_flag(config.r), config.phi)
    mu2 = mu_tensor(flag.x0_flag(config.r), config.s)
    return mu1, mu2


def functional_terms(config: SwampConfig, flag: NumericFlag) -> tuple[Fraction, Fraction, Fraction]:
    """(M, mu_1, mu_2); the functional is M + delta1 mu_1 + delta2 mu_2."""
    _check_realizable(config, flag)
    return (slope_excess(config, flag),) + mu_terms(config, flag)


def _check_deltas(*deltas) -> tuple[Fraction, ...]:
    out = tuple(linalg.to_fraction(x) for x in deltas)
    if any(x < 0 for x in out):
        raise NonPositiveWeight("stability parameters must be non-negative")
    return out


def stability_functional(config: SwampConfig, flag: NumericFlag, delta1, delta2) -> Fraction:
    delta1, delta2 = _check_deltas(delta1, delta2)
    m, mu1, mu2 = functional_terms(config, flag)
    return m + delta1 * mu1 + delta2 * mu2


def _verdict(values: Sequence[tuple[NumericFlag, Fraction]]) -> tuple[str, NumericFlag | None]:
    negative = [(f, v) for f, v in values if v < 0]
    if negative:
        return UNSTABLE, min(negative, key=lambda fv: fv[1])[0]
    zero = [f for f, v in values if v == 0]
    if zero:
        return SEMISTABLE, zero[0]
    return STABLE, None


def check_stability(config: SwampConfig, candidates: Sequence[NumericFlag], delta1, delta2,
                    scope: str = "supplied", strict: bool = False) -> StabilityReport:
    """Verdict over a candidate list.

    ``scope`` is "supplied" for caller-chosen candidates and "enumerated" for
    the output of :func:`enumerate_candidates`. With ``strict``, a
    non-destabilized verdict over supplied candidates is reported as
    inconclusive (the witness of an unstable verdict is conclusive either way).
    """
    if not candidates:
        raise EmptyCandidates("no candidate flags supplied")
    values = [(f, stability_functional(config, f, delta1, delta2)) for f in candidates]
    verdict, witness = _verdict(values)
    report = StabilityReport(verdict, witness, values, scope)
    if config.split_degrees is not None and scope == "enumerated":
        report.non_coordinate = non_coordinate_count(config.split_degrees, candidates)
        if report.non_coordinate:
            report.notes.append(
                f"{report.non_coordinate} enumerated flags have members that also occur in non-coordinate position")
    if strict and scope != "enumerated" and verdict != UNSTABLE:
        report.verdict = INCONCLUSIVE
        report.notes.append("verdict relative to supplied candidates")
    return report


def _chains(r: int, max_length: int):
    def extend(chain):
        yield chain
        if len(chain) == max_length:
            return
        last = chain[-1] if chain else frozenset()
        rest = [i for i in range(r) if i not in last]
        for size in range(1, len(rest)):
            for extra in combinations(rest, size):
                yield from extend(chain + (last | frozenset(extra),))

    for c in extend(()):
        if c:
            yield c


def enumerate_candidates(config: SwampConfig, max_length: int | None = None) -> list[NumericFlag]:
    """Flags of coordinate sub-sums of the split bundle, unit weights, length <= max_length."""
    if config.split_degrees is None:
        raise NoSplitModel("candidate enumeration needs split_degrees")
    r = config.r
    if max_length is None:
        max_length = r - 1
    chains = sorted(_chains(r, max_length), key=lambda c: (len(c), [sorted(s) for s in c]))
    out = []
    for chain in chains:
        subs = tuple(Subspace.coordinate(r, s) for s in chain)
        degrees = tuple(sum(config.split_degrees[i] for i in s) for s in chain)
        out.append(NumericFlag(degrees, (Fraction(1),) * len(chain), subs, subs))
    return out


def _movable(split_degrees: Sequence[int], members: Sequence[int]) -> bool:
    inside = set(members)
    return any(split_degrees[j] >= split_degrees[i]
               for i in inside for j in range(len(split_degrees)) if j not in inside)


def non_coordinate_count(split_degrees: Sequence[int], flags: Sequence[NumericFlag]) -> int:
    """Number of flags with a member that automorphisms of the split bundle move off the coordinates."""
    count = 0
    for f in flags:
        for sub in f.generic:
            members = sub.coordinate_support()
            if members is not None and _movable(split_degrees, members):
                count += 1
                break
    return count


def h0_split(degrees: Sequence[int], n: int) -> int:
    """h^0 of a sum of line bundles O(d_i)(n) on the projective line."""
    return sum(max(0, d + n + 1) for d in degrees)


def section_counts(config: SwampConfig, flag: NumericFlag, n: int, h1_vanishing: bool = False) -> tuple[int, list[int]]:
    """(h^0(E(n)), [h^0(E_j(n))]) from the split model or from Riemann-Roch."""
    if h1_vanishing:
        chi = lambda deg, rk: deg + rk * (n + 1 - config.g)
        return chi(config.d, config.r), [chi(dj, rk) for dj, rk in zip(flag.degrees, flag.ranks)]
    if config.split_degrees is None:
        raise H0Unavailable("h^0 needs the split model or an h^1 = 0 assertion")
    parts = []
    for sub, dj in zip(flag.generic, flag.degrees):
        members = sub.coordinate_support()
        if members is None or sum(config.split_degrees[i] for i in members) != dj:
            raise H0Unavailable("flag member is not a coordinate sub-sum of the split model")
        parts.append(h0_split([config.split_degrees[i] for i in members], n))
    return h0_split(config.split_degrees, n), parts


def section_excess(config: SwampConfig, flag: NumericFlag, n: int, h1_vanishing: bool = False) -> Fraction:
    """M^s = sum_i alpha_i (h0(E(n)) rk E_i - h0(E_i(n)) rk E)."""
    total, parts = section_counts(config, flag, n, h1_vanishing)
    return sum((a * (total * rk - h * config.r)
                for a, rk, h in zip(flag.weights, flag.ranks, parts)), Fraction(0))


def section_functional(config: SwampConfig, flag: NumericFlag, delta1, delta2, n: int,
                       h1_vanishing: bool = False) -> Fraction:
    delta1, delta2 = _check_deltas(delta1, delta2)
    ms = section_excess(config, flag, n, h1_vanishing)
    mu1, mu2 = mu_terms(config, flag)
    return ms + delta1 * mu1 + delta2 * mu2


def check_section_stability(config: SwampConfig, candidates: Sequence[NumericFlag], delta1, delta2, n: int,
                            h1_vanishing: bool = False, scope: str = "supplied") -> StabilityReport:
    if not candidates:
        raise EmptyCandidates("no candidate flags supplied")
    values = [(f, section_functional(config, f, delta1, delta2, n, h1_vanishing)) for f in candidates]
    verdict, witness = _verdict(values)
    return StabilityReport(verdict, witness, values, scope)


def slope_bound_C(delta1, delta2, a1: int, a2: int, r: int) -> Fraction:
    """Bound C with mu(F) <= mu(E) + C for subbundles of semistable swamps."""
    delta1, delta2 = _check_deltas(delta1, delta2)
    return (delta1 * a1 + delta2 * a2) * Fraction(r - 1, r)


def h1_threshold(config: SwampConfig, delta1, delta2) -> Fraction:
    """Twist beyond which section-semistability forces h^1(E(n)) = 0: 2g - mu(E) + a1 d1 + a2 d2."""
    delta1, delta2 = _check_deltas(delta1, delta2)
    return 2 * config.g - Fraction(config.d, config.r) + config.a1 * delta1 + config.a2 * delta2


def is_critical(config: SwampConfig, flag: NumericFlag, delta1, delta2) -> bool:
    return stability_functional(config, flag, delta1, delta2) == 0


def delta_walls(config: SwampConfig, candidates: Sequence[NumericFlag], delta1,
                delta2_range: tuple | None = None) -> list[Fraction]:
    """Sorted positive delta2 values at which some candidate's functional vanishes.

    The functional is affine in delta2, so each candidate contributes at most
    one root; ``delta2_range`` = (lo, hi) is inclusive, ``hi`` may be None.
    """
    if not candidates:
        raise EmptyCandidates("no candidate flags supplied")
    (delta1,) = _check_deltas(delta1)
    lo, hi = (None, None) if delta2_range is None else delta2_range
    lo = None if lo is None else linalg.to_fraction(lo)
    hi = None if hi is None else linalg.to_fraction(hi)
    walls = set()
    for f in candidates:
        m, mu1, mu2 = functional_terms(config, f)
        if mu2 == 0:
            continue
        w = -(m + delta1 * mu1) / mu2
        if w <= 0 or (lo is not None and w < lo) or (hi is not None and w > hi):
            continue
        walls.add(w)
    return sorted(walls)


def _contract(items: dict, mats: Sequence[Sequence[Sequence[Fraction]]]) -> dict:
    """Replace slot t of every key by p, weighting with mats[t][p][old index]."""
    current = dict(items)
    for t, m in enumerate(mats):
        nxt = defaultdict(Fraction)
        for (copy, idx), v in current.items():
            old = idx[t]
            for p, row in enumerate(m):
                x = row[old]
                if x:
                    nxt[(copy, idx[:t] + (p,) + idx[t + 1:])] += v * x
        current = {k: v for k, v in nxt.items() if v}
    return current


def leading_component(form: DecorationForm, flag: WeightedFlag,
                      splitting: Sequence[Subspace] | None = None) -> DecorationForm:
    """Keep the part of the form of least weight in a basis adapted to the flag.

    The form is rewritten in the echelon-adapted basis (or in a basis drawn
    from ``splitting``, one piece per stage), coefficients of non-minimal
    weight are dropped, and the result is written back in standard
    coordinates through the same splitting.
    """
    spec = form.spec
    if splitting is None:
        basis, stages = adapted_basis(flag.subspaces, flag.ambient_dim)
    else:
        if len(splitting) != flag.length + 1:
            raise DimensionMismatch("one splitting piece per stage is required")
        basis, stages = [], []
        for i, piece in enumerate(splitting, start=1):
            if not piece.issubspace(flag.stage(i)):
                raise DimensionMismatch(f"splitting piece {i} is not inside V_{i}")
            basis.extend(piece.basis)
            stages.extend([i] * piece.dim)
        if linalg.rank(basis) != flag.ambient_dim:
            raise DimensionMismatch("splitting does not give a basis")
    gamma = gamma_from_flag(flag).values
    adapted = _contract(form.coefficients, [basis] * spec.a)
    if not adapted:
        raise ZeroForm("the decoration vanishes identically")
    weight = {k: sum((gamma[stages[i] - 1] for i in k[1]), Fraction(0)) for k in adapted}
    w_min = min(weight.values())
    kept = {k: v for k, v in adapted.items() if weight[k] == w_min}
    inv = linalg.inverse(basis)
    back = _contract(kept, [inv] * spec.a)
    return DecorationForm.from_coefficients(spec, back)


def graded_pieces(config: SwampConfig, flag: NumericFlag) -> tuple[tuple[int, int], ...]:
    ranks = (0,) + flag.ranks + (config.r,)
    degrees = (0,) + flag.degrees + (config.d,)
    return tuple((ranks[i + 1] - ranks[i], degrees[i + 1] - degrees[i]) for i in range(len(ranks) - 1))


def admissible_deformation(config: SwampConfig, flag: NumericFlag) -> SwampConfig:
    """Pass to the associated graded object with leading-weight decorations."""
    _check_realizable(config, flag)
    phi_gr = leading_component(config.phi, flag.generic_flag(config.r))
    s_gr = leading_component(config.s, flag.x0_flag(config.r))
    split = config.split_degrees
    if split is not None:
        for sub, dj in zip(flag.generic, flag.degrees):
            members = sub.coordinate_support()
            if members is None or sum(split[i] for i in members) != dj:
                split = None
                break
    return replace(config, phi=phi_gr, s=s_gr, split_degrees=split,
                   graded_pieces=graded_pieces(config, flag))


def is_weight_homogeneous(form: DecorationForm, flag: WeightedFlag) -> bool:
    basis, stages = adapted_basis(flag.subspaces, flag.ambient_dim)
    gamma = gamma_from_flag(flag).values
    adapted = _contract(form.coefficients, [basis] * form.spec.a)
    weights = {sum((gamma[stages[i] - 1] for i in k[1]), Fraction(0)) for k in adapted}
    return len(weights) == 1


def trivial_flag() -> NumericFlag:
    return NumericFlag((), (), (), ())


def all_stage_tuples(k: int, a: int):
    return product(range(1, k + 2), repeat=a)
