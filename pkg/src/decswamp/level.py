"""Level structures: Seshadri homomorphisms and completed homomorphisms.

A completed homomorphism is a tuple (f_1, ..., f_r; l_1, ..., l_{r-1}) with
f_i an endomorphism of the i-th wedge power of Q^r, stored as a
C(r,i) x C(r,i) matrix acting on columns in the basis e_I (I sorted).

Strata are given as the tuple (r_1, ..., r_k, r) of indices i with
l_i = 0, always closed off by r. The descending flag W_1 > ... > W_k
lives in the source, the ascending flag W'_1 < ... < W'_k in the target.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from math import comb
from typing import Sequence

from . import linalg
from .errors import (
    DimensionMismatch,
    EmptyCandidates,
    NonAscendingChain,
    NonIsomorphismV,
    OutOfRange,
    RelationViolated,
    ZeroComponent,
    ZeroScalar,
)
from .flags import Subspace, WeightedFlag, adapted_basis
from .linalg import Matrix
from .swamp import NumericFlag, StabilityReport, _verdict
from .tensor import DecorationForm, TensorRepSpec, mu_tensor


def _check_stratum(stratum: Sequence[int], r: int) -> tuple[int, ...]:
    s = tuple(int(x) for x in stratum)
    if not s or s[-1] != r or any(b <= a for a, b in zip((0,) + s, s)):
        raise DimensionMismatch(f"stratum {s} must ascend from above 0 and end with r = {r}")
    return s


def c_index_bounds(i: int, stratum: Sequence[int]) -> tuple[int, int, int, int]:
    """(j_-, i_-, j^+, i^+) for 1 <= i <= r, with r_0 = 0 and r_{k+1} = r."""
    rs = (0,) + tuple(stratum)
    if not 1 <= i <= rs[-1]:
        raise OutOfRange(f"index {i} outside 1..{rs[-1]}")
    j_minus = max(j for j, rj in enumerate(rs) if rj < i)
    j_plus = min(j for j, rj in enumerate(rs) if i <= rj)
    return j_minus, rs[j_minus], j_plus, rs[j_plus]


def _w_member(w_flag: Sequence[Subspace], j: int, r: int) -> Subspace:
    """W_j with W_0 = ambient and W_{k+1} = 0."""
    if j == 0:
        return Subspace.full(r)
    if j == len(w_flag) + 1:
        return Subspace.zero(r)
    return w_flag[j - 1]


def _check_descending(w_flag: Sequence[Subspace], stratum: Sequence[int], r: int) -> None:
    if len(w_flag) != len(stratum) - 1:
        raise DimensionMismatch("one W member per proper stratum entry is required")
    for j, (w, rj) in enumerate(zip(w_flag, stratum), start=1):
        if w.ambient_dim != r or w.dim != r - rj:
            raise DimensionMismatch(f"W_{j} must have dimension {r - rj}")
        if not w.issubspace(_w_member(w_flag, j - 1, r)):
            raise NonAscendingChain("W flag must be descending")


def c_i(v: Subspace, w_flag: Sequence[Subspace], i: int, stratum: Sequence[int]) -> int:
    r = v.ambient_dim
    stratum = _check_stratum(stratum, r)
    _check_descending(w_flag, stratum, r)
    j_minus, i_minus, j_plus, _ = c_index_bounds(i, stratum)
    quot = lambda j: v.dim - (v & _w_member(w_flag, j, r)).dim
    return min(quot(j_plus), quot(j_minus) + i - i_minus)


def q_poly(s: int, theta: Sequence[int], r: int) -> Fraction:
    if not 0 <= s <= r or len(theta) != r:
        raise OutOfRange(f"q needs 0 <= s <= r and r weights; got s = {s}, r = {r}")
    total = sum(t * i for i, t in enumerate(theta, start=1))
    head = sum(t * i for i, t in enumerate(theta, start=1) if i <= s)
    tail = sum(t * s for i, t in enumerate(theta, start=1) if i > s)
    return Fraction(head + tail) - Fraction(s * total, r)


@dataclass(frozen=True)
class CompletedHom:
    r: int
    f: tuple[Matrix, ...]
    l: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.f) != self.r or len(self.l) != self.r - 1:
            raise DimensionMismatch("need r wedge components and r - 1 scalars")
        for i, m in enumerate(self.f, start=1):
            n = comb(self.r, i)
            if len(m) != n or any(len(row) != n for row in m):
                raise DimensionMismatch(f"f_{i} must be a {n} x {n} matrix")

    @property
    def stratum(self) -> tuple[int, ...]:
        return tuple(i for i, x in enumerate(self.l, start=1) if x == 0) + (self.r,)


def make_completed_hom(r: int, f: Sequence[Sequence[Sequence]], l: Sequence) -> CompletedHom:
    return CompletedHom(r, tuple(linalg.mat(m) for m in f), tuple(linalg.to_fraction(x) for x in l))


def _rank(m: Matrix) -> int:
    return linalg.rank(m)


def _scale(m: Matrix, c: Fraction) -> Matrix:
    return tuple(tuple(c * x for x in row) for row in m)


def omega_check(point: CompletedHom) -> tuple[int, ...]:
    """Verify the defining relations and rank pattern; return the stratum (zero pattern of l, plus r)."""
    r = point.r
    for i, fi in enumerate(point.f, start=1):
        if linalg.is_zero(fi):
            raise ZeroComponent(f"f_{i} vanishes")
    stratum = point.stratum
    for i in range(1, r + 1):
        coeff = Fraction(1)
        for j in range(1, i):
            coeff *= point.l[j - 1] ** (i - j)
        if linalg.compound(point.f[0], i) != _scale(point.f[i - 1], coeff):
            raise RelationViolated(f"wedge relation fails in degree {i}")
        _, i_minus, _, i_plus = c_index_bounds(i, stratum)
        if _rank(point.f[i - 1]) != comb(i_plus - i_minus, i - i_minus):
            raise RelationViolated(f"f_{i} has the wrong rank for stratum {stratum}")
    return stratum


def torus_act(z: Sequence, point: CompletedHom) -> CompletedHom:
    """f'_i = z_i f_i, l'_i = z_{i-1}^{-1} z_i^2 z_{i+1}^{-1} l_i with z_0 = 1."""
    z = tuple(linalg.to_fraction(x) for x in z)
    if len(z) != point.r:
        raise DimensionMismatch("need one scalar per wedge degree")
    if any(x == 0 for x in z):
        raise ZeroScalar("torus elements must be nonzero")
    zz = (Fraction(1),) + z
    f = tuple(_scale(m, z[i]) for i, m in enumerate(point.f))
    l = tuple(point.l[i - 1] * zz[i] ** 2 / (zz[i - 1] * zz[i + 1]) for i in range(1, point.r))
    return CompletedHom(point.r, f, l)


@dataclass(frozen=True)
class CompletedHomDecomposition:
    """Stratum, scalars, flags and lifts A_j of the isomorphisms v_j: W_{j-1}/W_j -> W'_j/W'_{j-1}.

    ``lifts[j-1]`` is an r x r matrix acting on columns with
    A_j(W_{j-1}) in W'_j and A_j(W_j) in W'_{j-1}.
    """

    r: int
    stratum: tuple[int, ...]
    l: tuple[Fraction, ...]
    w: tuple[Subspace, ...]
    w_prime: tuple[Subspace, ...]
    lifts: tuple[Matrix, ...]

    def __post_init__(self):
        r = self.r
        _check_stratum(self.stratum, r)
        if len(self.l) != r - 1:
            raise DimensionMismatch("need r - 1 scalars")
        if tuple(i for i, x in enumerate(self.l, start=1) if x == 0) + (r,) != self.stratum:
            raise DimensionMismatch("zero pattern of l differs from the stratum")
        _check_descending(self.w, self.stratum, r)
        k = len(self.stratum) - 1
        if len(self.w_prime) != k or len(self.lifts) != k + 1:
            raise DimensionMismatch("need k members of W' and k + 1 lifts")
        prev = Subspace.zero(r)
        for wp, rj in zip(self.w_prime, self.stratum):
            if wp.ambient_dim != r or wp.dim != rj or not prev.issubspace(wp):
                raise NonAscendingChain("W' must ascend with dimensions r_j")
            prev = wp
        for j, a in enumerate(self.lifts, start=1):
            if len(a) != r or any(len(row) != r for row in a):
                raise DimensionMismatch("lifts must be r x r matrices")
            src, src_next = _w_member(self.w, j - 1, r), _w_member(self.w, j, r)
            dst, dst_prev = self.w_prime_member(j), self.w_prime_member(j - 1)
            if not all(dst.contains(linalg.matvec(a, b)) for b in src.basis):
                raise NonIsomorphismV(f"A_{j} does not map W_{j - 1} into W'_{j}")
            if not all(dst_prev.contains(linalg.matvec(a, b)) for b in src_next.basis):
                raise NonIsomorphismV(f"A_{j} does not map W_{j} into W'_{j - 1}")
            images = [linalg.matvec(a, b) for b in src.basis]
            if (Subspace.span(images, r) + dst_prev).dim != dst.dim:
                raise NonIsomorphismV(f"v_{j} is not an isomorphism")

    def w_prime_member(self, j: int) -> Subspace:
        if j == 0:
            return Subspace.zero(self.r)
        if j == len(self.w_prime) + 1:
            return Subspace.full(self.r)
        return self.w_prime[j - 1]


def make_decomposition(r: int, stratum: Sequence[int], l: Sequence, w: Sequence, w_prime: Sequence,
                       lifts: Sequence) -> CompletedHomDecomposition:
    subs = lambda chain: tuple(s if isinstance(s, Subspace) else Subspace.span(s, r) for s in chain)
    return CompletedHomDecomposition(r, tuple(int(x) for x in stratum), tuple(linalg.to_fraction(x) for x in l),
                                     subs(w), subs(w_prime), tuple(linalg.mat(a) for a in lifts))


def _blocks(dec: CompletedHomDecomposition) -> list[list[tuple[Fraction, ...]]]:
    """Echelon complements G_1, ..., G_{k+1} with W_{j-1} = G_j + W_j."""
    r = dec.r
    k = len(dec.w)
    chain = list(reversed(dec.w))
    basis, stages = adapted_basis(chain, r)
    blocks: list[list[tuple[Fraction, ...]]] = [[] for _ in range(k + 1)]
    for b, st in zip(basis, stages):
        blocks[k + 1 - st].append(b)
    return blocks


def wedge_hom(dec: CompletedHomDecomposition, i: int, blocks=None) -> Matrix:
    """h_i: the i-th wedge map induced by the v_j, in standard coordinates."""
    r = dec.r
    if blocks is None:
        blocks = _blocks(dec)
    j_minus, i_minus, j_plus, _ = c_index_bounds(i, dec.stratum)
    order = [b for blk in blocks for b in blk]
    offsets = [sum(len(blk) for blk in blocks[:j]) for j in range(len(blocks))]
    fixed = list(range(offsets[j_minus])) if j_minus else []
    free = list(range(offsets[j_plus - 1], offsets[j_plus - 1] + len(blocks[j_plus - 1])))
    subsets = linalg.wedge_basis(r, i)
    pos = {s: n for n, s in enumerate(subsets)}
    stage_of = []
    for j, blk in enumerate(blocks, start=1):
        stage_of.extend([j] * len(blk))
    adapted = [[Fraction(0)] * len(subsets) for _ in subsets]
    for extra in combinations(free, i - i_minus):
        t = tuple(fixed) + extra
        images = [linalg.matvec(dec.lifts[stage_of[p] - 1], order[p]) for p in t]
        col = linalg.compound(linalg.transpose(images), i) if images else ((Fraction(1),),)
        for row_idx, row in enumerate(col):
            adapted[row_idx][pos[t]] = row[0]
    p_inv = linalg.inverse(linalg.transpose(order))
    return linalg.matmul(adapted, linalg.compound(p_inv, i))


def reconstruct_completed_hom(dec: CompletedHomDecomposition) -> CompletedHom:
    """f_i = h_i divided by the product of l_j^(i-j) over j < i outside the stratum."""
    blocks = _blocks(dec)
    fs = []
    for i in range(1, dec.r + 1):
        scale = Fraction(1)
        for j in range(1, i):
            if j not in dec.stratum:
                scale *= dec.l[j - 1] ** (i - j)
        fs.append(_scale(wedge_hom(dec, i, blocks), 1 / scale))
    return CompletedHom(dec.r, tuple(fs), dec.l)


def _wedge_vector(vectors: Sequence[Sequence[Fraction]], r: int) -> tuple[Fraction, ...]:
    k = len(vectors)
    if k == 0:
        return (Fraction(1),)
    return tuple(row[0] for row in linalg.compound(linalg.transpose(vectors), k))


def extract_flags(point: CompletedHom) -> tuple[tuple[Subspace, ...], tuple[Subspace, ...]]:
    """Recover W and W' from a point whose f_i have the rank pattern of its stratum.

    W_1 = ker f_1; W_j is the kernel of w -> f_i(omega ^ w) on W_{j-1} with
    i = r_{j-1} + 1 and omega the wedge of complements of W_1, ..., W_{j-1};
    W'_j is the support of the decomposable image line of f_{r_j}.
    """
    r = point.r
    stratum = omega_check(point)
    w: list[Subspace] = []
    complements: list[tuple[Fraction, ...]] = []
    prev = Subspace.full(r)
    for j in range(1, len(stratum)):
        i = (stratum[j - 2] if j >= 2 else 0) + 1
        images = [linalg.matvec(point.f[i - 1], _wedge_vector(complements + [b], r)) for b in prev.basis]
        kernel = linalg.nullspace(linalg.transpose(images), len(images))
        member = Subspace.span(
            [tuple(sum((c * b[t] for c, b in zip(coef, prev.basis)), Fraction(0)) for t in range(r))
             for coef in kernel], r)
        w.append(member)
        complements.extend(_restricted_complement(member, prev))
        prev = member
    w_prime = []
    for rj in stratum[:-1]:
        line = next(col for col in linalg.transpose(point.f[rj - 1]) if any(col))
        w_prime.append(_divisors(line, r, rj))
    return tuple(w), tuple(w_prime)


def _restricted_complement(sub: Subspace, ambient: Subspace) -> list[tuple[Fraction, ...]]:
    """Echelon rows of ``ambient`` extending a basis of ``sub``."""
    out: list[tuple[Fraction, ...]] = []
    acc = list(sub.basis)
    for row in ambient.basis:
        if linalg.rank(acc + [row]) > len(acc):
            acc.append(row)
            out.append(row)
    return out


def _divisors(omega: Sequence[Fraction], r: int, k: int) -> Subspace:
    """{x : x ^ omega = 0} for a decomposable k-vector omega, which is its k-dimensional support."""
    rows = [_wedge_with(x, omega, r, k) for x in linalg.identity(r)]
    # x ^ omega is linear in x; its kernel is the support of omega
    kernel = linalg.nullspace(linalg.transpose(rows), r)
    return Subspace.span(kernel, r)


def _wedge_with(x: Sequence[Fraction], omega: Sequence[Fraction], r: int, k: int) -> tuple[Fraction, ...]:
    subsets = linalg.wedge_basis(r, k)
    bigger = linalg.wedge_basis(r, k + 1)
    pos = {s: n for n, s in enumerate(bigger)}
    out = [Fraction(0)] * len(bigger)
    for s, w in zip(subsets, omega):
        if not w:
            continue
        for t in range(r):
            if x[t] and t not in s:
                merged = tuple(sorted(s + (t,)))
                sign = linalg.perm_sign((t,) + s)
                out[pos[merged]] += sign * x[t] * w
    return tuple(out)


def hom_form(h: Matrix, r: int, i: int) -> DecorationForm:
    """h_i as a decoration on (V^(x)i)^(+)C(r,i): copy I evaluates the I-th coordinate of h_i(v_1 ^ ... ^ v_i)."""
    subsets = linalg.wedge_basis(r, i)
    spec = TensorRepSpec(i, len(subsets), 0, r)
    coeffs = {}
    for out_idx, row in enumerate(h):
        for col_idx, x in enumerate(row):
            if not x:
                continue
            for perm in permutations(subsets[col_idx]):
                coeffs[(out_idx, perm)] = linalg.perm_sign(perm) * x
    return DecorationForm.from_coefficients(spec, coeffs)


def mu_level_oracle(flag: WeightedFlag, w_flag: Sequence[Subspace], stratum: Sequence[int], i: int) -> Fraction:
    r = flag.ambient_dim
    return sum((a * (r * c_i(v, w_flag, i, stratum) - v.dim * i)
                for a, v in zip(flag.weights, flag.subspaces)), Fraction(0))


def mu_level_tensor(flag: WeightedFlag, point: CompletedHom, i: int) -> Fraction:
    return mu_tensor(flag, hom_form(point.f[i - 1], point.r, i))


def _subbundle(flag: NumericFlag) -> tuple[int, int, Subspace]:
    if flag.length != 1:
        raise DimensionMismatch("candidates are single subbundles")
    return flag.ranks[0], flag.degrees[0], flag.x0[0]


def seshadri_c(f: Matrix, x0: Subspace) -> int:
    return int(any(any(linalg.matvec(f, b)) for b in x0.basis))


def seshadri_value(r: int, d: int, f: Matrix, delta2, flag: NumericFlag) -> Fraction:
    """(deg E - delta2) rk F - (deg F - delta2 c(F, f)) rk E."""
    delta2 = linalg.to_fraction(delta2)
    rk, deg, x0 = _subbundle(flag)
    return (d - delta2) * rk - (deg - delta2 * seshadri_c(f, x0)) * r


def seshadri_stable(r: int, d: int, f: Sequence[Sequence], delta2, candidates: Sequence[NumericFlag]) -> StabilityReport:
    f = linalg.mat(f)
    if len(f) != r or any(len(row) != r for row in f):
        raise DimensionMismatch("level map must be r x r")
    if linalg.is_zero(f):
        raise ZeroComponent("the level map vanishes")
    if not candidates:
        raise EmptyCandidates("no candidate subbundles supplied")
    values = [(c, seshadri_value(r, d, f, delta2, c)) for c in candidates]
    verdict, witness = _verdict(values)
    return StabilityReport(verdict, witness, values)


def deg_theta(degree: int, x0: Subspace, delta2, theta: Sequence[int], w_flag: Sequence[Subspace],
              stratum: Sequence[int]) -> Fraction:
    delta2 = linalg.to_fraction(delta2)
    return degree - delta2 * sum(t * c_i(x0, w_flag, i, stratum) for i, t in enumerate(theta, start=1))


def level_value(r: int, d: int, delta2, theta: Sequence[int], w_flag: Sequence[Subspace], stratum: Sequence[int],
                flag: NumericFlag) -> Fraction:
    rk, deg, x0 = _subbundle(flag)
    whole = deg_theta(d, Subspace.full(r), delta2, theta, w_flag, stratum)
    return whole * rk - deg_theta(deg, x0, delta2, theta, w_flag, stratum) * r


def _check_theta(theta: Sequence[int], r: int) -> tuple[int, ...]:
    theta = tuple(int(t) for t in theta)
    if len(theta) != r or any(t < 1 for t in theta):
        raise DimensionMismatch("theta must be r positive integers")
    return theta


def level_stable(r: int, d: int, w_flag: Sequence[Subspace], stratum: Sequence[int], delta2, theta: Sequence[int],
                 candidates: Sequence[NumericFlag]) -> StabilityReport:
    theta = _check_theta(theta, r)
    if not candidates:
        raise EmptyCandidates("no candidate subbundles supplied")
    values = [(c, level_value(r, d, delta2, theta, w_flag, stratum, c)) for c in candidates]
    verdict, witness = _verdict(values)
    return StabilityReport(verdict, witness, values)


def level_decorated_value(point: CompletedHom, d: int, delta2, theta: Sequence[int], flag: NumericFlag) -> Fraction:
    """M + delta2 sum_i theta_i mu([f_i]) through the tensor engine."""
    r = point.r
    rk, deg, x0 = _subbundle(flag)
    wf = WeightedFlag(r, (x0,), flag.weights)
    delta2 = linalg.to_fraction(delta2)
    m = flag.weights[0] * (d * rk - deg * r)
    return m + delta2 * sum(t * mu_level_tensor(wf, point, i) for i, t in enumerate(theta, start=1))


def _bar_dims(x0: Subspace, w_flag: Sequence[Subspace], s: int, stratum: Sequence[int]) -> tuple[int, int]:
    r = x0.ambient_dim
    j_minus, s_minus, j_plus, _ = c_index_bounds(s, stratum)
    upper = (x0 & _w_member(w_flag, j_minus, r)).dim
    lower = (x0 & _w_member(w_flag, j_plus, r)).dim
    return s_minus, upper - lower


def lemma_identity_check(x0: Subspace, rank: int, w_flag: Sequence[Subspace], stratum: Sequence[int],
                         theta: Sequence[int]) -> tuple[Fraction, Fraction, bool]:
    r = x0.ambient_dim
    if rank != x0.dim:
        raise DimensionMismatch("rank differs from the fiber dimension")
    stratum = _check_stratum(stratum, r)
    lhs = Fraction(sum(t * (r * c_i(x0, w_flag, i, stratum) - rank * i) for i, t in enumerate(theta, start=1)))
    rhs = Fraction(0)
    for s in stratum:
        s_minus, jump = _bar_dims(x0, w_flag, s, stratum)
        rhs += q_poly(s_minus + jump, theta, r) - q_poly(s_minus, theta, r)
    rhs *= r
    return lhs, rhs, lhs == rhs


def ngo_dac_margin(degree: int, x0: Subspace, d: int, delta2, theta: Sequence[int], stratum: Sequence[int],
                   w_flag: Sequence[Subspace]) -> Fraction:
    """deg(E) rk(F) + r delta2 sum_s (q(s_- + dim) - q(s_-)) - deg(F) r."""
    r = x0.ambient_dim
    delta2 = linalg.to_fraction(delta2)
    total = Fraction(0)
    for s in _check_stratum(stratum, r):
        s_minus, jump = _bar_dims(x0, w_flag, s, stratum)
        total += q_poly(s_minus + jump, theta, r) - q_poly(s_minus, theta, r)
    return d * x0.dim + r * delta2 * total - degree * r


def ngo_dac_condition(degree: int, x0: Subspace, d: int, delta2, theta: Sequence[int], stratum: Sequence[int],
                      w_flag: Sequence[Subspace], strict: bool = False) -> bool:
    m = ngo_dac_margin(degree, x0, d, delta2, theta, stratum, w_flag)
    return m > 0 if strict else m >= 0
