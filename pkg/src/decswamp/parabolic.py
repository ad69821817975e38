"""Quasi-parabolic bundles: parabolic degree, slope stability, and agreement with the decorated functional."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from . import linalg
from .errors import DimensionMismatch, EmptyCandidates, InadmissibleWeights, NonAscendingChain, NonPositiveWeight
from .flags import Subspace
from .swamp import NumericFlag, StabilityReport, SwampConfig, _verdict, stability_functional
from .tensor import DecorationForm, TensorRepSpec, plucker_form


@dataclass(frozen=True)
class ParabolicStructure:
    """Flag U_1 < ... < U_k in the fiber at x0 with multiplicities beta_j and parameter delta2."""

    x0_flag: tuple[Subspace, ...]
    beta: tuple[int, ...]
    delta2: Fraction

    def __post_init__(self):
        if not self.x0_flag:
            raise NonAscendingChain("a parabolic structure needs at least one flag member")
        if len(self.beta) != len(self.x0_flag):
            raise DimensionMismatch("one multiplicity per flag member is required")
        if any(b < 1 for b in self.beta):
            raise NonPositiveWeight("multiplicities must be positive integers")
        if self.delta2 < 0:
            raise NonPositiveWeight("delta2 must be non-negative")
        r = self.r
        prev = Subspace.zero(r)
        for u in self.x0_flag:
            if u.ambient_dim != r or not (prev.dim < u.dim < r) or not prev.issubspace(u):
                raise NonAscendingChain("parabolic flag must be strictly ascending and proper")
            prev = u

    @property
    def r(self) -> int:
        return self.x0_flag[0].ambient_dim

    @property
    def flag_type(self) -> tuple[int, ...]:
        return tuple(u.dim for u in self.x0_flag)

    @property
    def parabolic_weights(self) -> tuple[Fraction, ...]:
        """alpha~_i = delta2 * sum_{j >= i} beta_j, strictly descending."""
        return tuple(self.delta2 * sum(self.beta[i:]) for i in range(len(self.beta)))

    @property
    def admissible(self) -> bool:
        return self.parabolic_weights[0] < 1

    @property
    def a2(self) -> int:
        return sum(b * (self.r - u.dim) for b, u in zip(self.beta, self.x0_flag))


def make_parabolic(r: int, chain: Sequence, beta: Sequence[int], delta2) -> ParabolicStructure:
    subs = tuple(s if isinstance(s, Subspace) else Subspace.span(s, r) for s in chain)
    return ParabolicStructure(subs, tuple(int(b) for b in beta), linalg.to_fraction(delta2))


def pardeg(degree: int, x0: Subspace, structure: ParabolicStructure) -> Fraction:
    if x0.ambient_dim != structure.r:
        raise DimensionMismatch("subspace lives in the wrong fiber")
    return degree + structure.delta2 * sum(b * (x0 & u).dim for b, u in zip(structure.beta, structure.x0_flag))


def _subbundle(flag: NumericFlag) -> tuple[int, int, Subspace]:
    if flag.length != 1:
        raise DimensionMismatch("parabolic candidates are single subbundles")
    return flag.ranks[0], flag.degrees[0], flag.x0[0]


def parabolic_difference(structure: ParabolicStructure, d: int, flag: NumericFlag) -> Fraction:
    """rk(F) pardeg(E) - rk(E) pardeg(F), scaled by the weight; (>=) 0 is (semi)stability."""
    rk, deg, x0 = _subbundle(flag)
    r = structure.r
    whole = pardeg(d, Subspace.full(r), structure)
    return flag.weights[0] * (rk * whole - r * pardeg(deg, x0, structure))


def parabolic_stable(structure: ParabolicStructure, d: int, candidates: Sequence[NumericFlag]) -> StabilityReport:
    if not candidates:
        raise EmptyCandidates("no candidate subbundles supplied")
    values = [(f, parabolic_difference(structure, d, f)) for f in candidates]
    verdict, witness = _verdict(values)
    return StabilityReport(verdict, witness, values)


def decorated_config(structure: ParabolicStructure, d: int, l: int = 0, g: int = 0) -> SwampConfig:
    """Swamp with trivial rho and the Pluecker decoration of the flag at x0."""
    r = structure.r
    rho = TensorRepSpec(0, 1, 0, r)
    s = plucker_form(structure.x0_flag, structure.beta)
    return SwampConfig(r, d, l, g, rho, s.spec, DecorationForm.from_coefficients(rho, {(0, ()): 1}), s)


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def parabolic_equivalence_oracle(structure: ParabolicStructure, d: int, candidates: Sequence[NumericFlag]) -> bool:
    """Candidate by candidate, the decorated functional and the parabolic slope difference have equal sign."""
    if not structure.admissible:
        raise InadmissibleWeights(f"parabolic weight {structure.parabolic_weights[0]} is not below 1")
    if not candidates:
        raise EmptyCandidates("no candidate subbundles supplied")
    config = decorated_config(structure, d)
    return all(
        _sign(stability_functional(config, f, 0, structure.delta2)) == _sign(parabolic_difference(structure, d, f))
        for f in candidates
    )


def coordinate_candidates(r: int, degrees_by_rank: dict[int, Sequence[int]]) -> list[NumericFlag]:
    """Single-step flags over all coordinate subspaces, one per listed degree of that rank."""
    out = []
    for rank in range(1, r):
        for idx in combinations(range(r), rank):
            sub = Subspace.coordinate(r, idx)
            for deg in degrees_by_rank.get(rank, ()):
                out.append(NumericFlag((int(deg),), (Fraction(1),), (sub,), (sub,)))
    return out
