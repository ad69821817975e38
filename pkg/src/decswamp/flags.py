"""Subspaces, weighted flags and the linear Hilbert-Mumford weight."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import linalg
from .errors import (
    DimensionMismatch,
    NonAscendingChain,
    NonAscendingWeights,
    NonPositiveWeight,
    ZeroFunctional,
)
from .linalg import Vector


@dataclass(frozen=True)
class Subspace:
    """A subspace of Q^n, stored by the reduced row-echelon form of a basis.

    Because the basis is canonical, ``==`` and ``hash`` compare subspaces.
    """

    ambient_dim: int
    basis: tuple[Vector, ...]

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient_dim: int) -> Subspace:
        rows = [linalg.vec(v) for v in vectors]
        for v in rows:
            if len(v) != ambient_dim:
                raise DimensionMismatch(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
        red, _ = linalg.rref(rows, ambient_dim)
        return cls(ambient_dim, red)

    @classmethod
    def zero(cls, ambient_dim: int) -> Subspace:
        return cls(ambient_dim, ())

    @classmethod
    def full(cls, ambient_dim: int) -> Subspace:
        return cls(ambient_dim, linalg.identity(ambient_dim))

    @classmethod
    def coordinate(cls, ambient_dim: int, indices: Iterable[int]) -> Subspace:
        return cls.span([linalg.unit(ambient_dim, i) for i in sorted(set(indices))], ambient_dim)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence) -> bool:
        v = linalg.vec(v)
        return linalg.rank(self.basis + (v,)) == self.dim

    def issubspace(self, other: Subspace) -> bool:
        return all(other.contains(b) for b in self.basis)

    def __add__(self, other: Subspace) -> Subspace:
        self._check(other)
        return Subspace.span(self.basis + other.basis, self.ambient_dim)

    def __and__(self, other: Subspace) -> Subspace:
        self._check(other)
        # V & W = annihilator of (ann V + ann W)
        ann = self.annihilator().basis + other.annihilator().basis
        return Subspace.span(linalg.nullspace(ann, self.ambient_dim), self.ambient_dim)

    def annihilator(self) -> Subspace:
        """The subspace of dual vectors vanishing on self, in dual coordinates."""
        return Subspace.span(linalg.nullspace(self.basis, self.ambient_dim), self.ambient_dim)

    def coordinate_support(self) -> tuple[int, ...] | None:
        """Index set I if self is the coordinate span of e_i (i in I), else None."""
        idx = []
        for row in self.basis:
            nz = [i for i, x in enumerate(row) if x != 0]
            if len(nz) != 1:
                return None
            idx.append(nz[0])
        return tuple(idx)

    def _check(self, other: Subspace) -> None:
        if other.ambient_dim != self.ambient_dim:
            raise DimensionMismatch("subspaces live in different ambient spaces")


def adapted_basis(chain: Sequence[Subspace], ambient_dim: int) -> tuple[list[Vector], list[int]]:
    """Basis adapted to an ascending chain, plus the stage (1-based) of each vector.

    Stage i collects the echelon-basis rows of V_i that are independent of
    V_{i-1}; the last stage completes V_{k+1} = ambient with unit vectors.
    """
    members = list(chain) + [Subspace.full(ambient_dim)]
    basis: list[Vector] = []
    stages: list[int] = []
    for stage, sub in enumerate(members, start=1):
        for row in sub.basis:
            if linalg.rank(basis + [row]) > len(basis):
                basis.append(row)
                stages.append(stage)
    return basis, stages


@dataclass(frozen=True)
class WeightVector:
    values: tuple[Fraction, ...]
    multiplicities: tuple[int, ...]

    @property
    def trace(self) -> Fraction:
        return sum((g * m for g, m in zip(self.values, self.multiplicities)), Fraction(0))


@dataclass(frozen=True)
class WeightedFlag:
    """Ascending chain 0 < V_1 < ... < V_k < Q^n with positive rational weights.

    ``k == 0`` is the trivial flag with an empty weight tuple.
    """

    ambient_dim: int
    subspaces: tuple[Subspace, ...]
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.subspaces) != len(self.weights):
            raise DimensionMismatch("one weight per flag member is required")
        prev = Subspace.zero(self.ambient_dim)
        for sub in self.subspaces:
            if sub.ambient_dim != self.ambient_dim:
                raise DimensionMismatch("flag member in the wrong ambient space")
            if not (prev.dim < sub.dim < self.ambient_dim) or not prev.issubspace(sub):
                raise NonAscendingChain("flag members must form a strictly ascending chain of proper subspaces")
            prev = sub
        for w in self.weights:
            if w <= 0:
                raise NonPositiveWeight(f"weight {w} is not positive")

    @property
    def length(self) -> int:
        return len(self.subspaces)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(s.dim for s in self.subspaces)

    def scaled(self, m) -> WeightedFlag:
        m = linalg.to_fraction(m)
        return WeightedFlag(self.ambient_dim, self.subspaces, tuple(m * w for w in self.weights))

    def with_weights(self, weights: Sequence) -> WeightedFlag:
        return WeightedFlag(self.ambient_dim, self.subspaces, tuple(linalg.to_fraction(w) for w in weights))

    def stage(self, i: int) -> Subspace:
        """V_i for 1 <= i <= k+1, with V_{k+1} the ambient space."""
        if i == self.length + 1:
            return Subspace.full(self.ambient_dim)
        return self.subspaces[i - 1]


def make_weighted_flag(ambient_dim: int, subspaces: Sequence, weights: Sequence) -> WeightedFlag:
    """Build a flag from subspaces (or lists of spanning vectors) and weights."""
    subs = tuple(s if isinstance(s, Subspace) else Subspace.span(s, ambient_dim) for s in subspaces)
    return WeightedFlag(ambient_dim, subs, tuple(linalg.to_fraction(w) for w in weights))


def gamma_values(dims: Sequence[int], weights: Sequence[Fraction], ambient_dim: int) -> tuple[Fraction, ...]:
    """gamma_i = sum_j a_j dim V_j - n * sum_{j >= i} a_j for i = 1..k+1."""
    base = sum((a * d for a, d in zip(weights, dims)), Fraction(0))
    out = []
    tail = sum(weights, Fraction(0))
    for i in range(len(dims) + 1):
        out.append(base - ambient_dim * tail)
        if i < len(weights):
            tail -= weights[i]
    return tuple(out)


def gamma_from_flag(flag: WeightedFlag) -> WeightVector:
    dims = flag.dims
    values = gamma_values(dims, flag.weights, flag.ambient_dim)
    edges = (0,) + dims + (flag.ambient_dim,)
    mults = tuple(edges[i + 1] - edges[i] for i in range(len(values)))
    return WeightVector(values, mults)


def flag_from_gamma(gamma: WeightVector, eigenspaces: Sequence[Subspace] | None = None) -> WeightedFlag:
    """Weighted flag of a one-parameter subgroup with eigenvalues ``gamma``.

    ``eigenspaces`` lists the eigenspace V^i of each weight; by default the
    coordinate splitting e_1.. is used, consuming multiplicities in order.
    """
    values = tuple(linalg.to_fraction(g) for g in gamma.values)
    n = sum(gamma.multiplicities)
    if any(b <= a for a, b in zip(values, values[1:])):
        raise NonAscendingWeights("weights must be strictly ascending")
    if eigenspaces is None:
        start, eigenspaces = 0, []
        for m in gamma.multiplicities:
            eigenspaces.append(Subspace.coordinate(n, range(start, start + m)))
            start += m
    if len(eigenspaces) != len(values):
        raise DimensionMismatch("one eigenspace per weight is required")
    if [e.dim for e in eigenspaces] != list(gamma.multiplicities):
        raise DimensionMismatch("eigenspace dimensions differ from multiplicities")
    subs = []
    acc = Subspace.zero(n)
    for e in eigenspaces[:-1]:
        acc = acc + e
        subs.append(acc)
    if (acc + eigenspaces[-1]).dim != n:
        raise DimensionMismatch("eigenspaces do not span the ambient space")
    alphas = tuple((values[j + 1] - values[j]) / n for j in range(len(values) - 1))
    return WeightedFlag(n, tuple(subs), alphas)


def restriction_nonzero(functional: Sequence[Fraction], sub: Subspace) -> bool:
    return any(linalg.dot(functional, b) != 0 for b in sub.basis)


def mu_linear(flag: WeightedFlag, functional: Sequence) -> Fraction:
    """-gamma_{i0} where i0 is the first stage on which the functional is nonzero."""
    f = linalg.vec(functional)
    if len(f) != flag.ambient_dim:
        raise DimensionMismatch("functional has the wrong length")
    if all(x == 0 for x in f):
        raise ZeroFunctional("the functional is zero")
    gamma = gamma_from_flag(flag).values
    for i in range(1, flag.length + 2):
        if restriction_nonzero(f, flag.stage(i)):
            return -gamma[i - 1]
    raise AssertionError("unreachable: a nonzero functional is nonzero on the ambient space")


def mu_linear_split(flag: WeightedFlag, functional: Sequence, splitting: Sequence[Subspace]) -> Fraction:
    """-min{gamma_i : f|V^i != 0} for an explicit splitting V = sum V^i compatible with the flag."""
    f = linalg.vec(functional)
    if all(x == 0 for x in f):
        raise ZeroFunctional("the functional is zero")
    gamma = gamma_from_flag(flag).values
    acc = Subspace.zero(flag.ambient_dim)
    for i, piece in enumerate(splitting, start=1):
        acc = acc + piece
        if acc != flag.stage(i):
            raise DimensionMismatch("splitting is not compatible with the flag")
    return -min(g for g, piece in zip(gamma, splitting) if restriction_nonzero(f, piece))
