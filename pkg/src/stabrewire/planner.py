"""Measurement-path synthesis between two stabilizer codes.

Pipeline: connectivity matrix -> simultaneous row/column reduction ->
blocks A (shared), B (logical for the other code, handled by two
measurements with complementary operators) and C (anticommuting pairs,
one measurement each) -> ordered measurement plan.

Every transformed generator is tracked as a GF(2) combination (an int
bitmask) of the original generators on its own side, so the transformed
operator is the product of those generators.  Generators of one code
commute, so the product and its sign do not depend on the order.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .codes import CodeError, StabilizerCode, compute_logicals, pad_with_ancillas, parse_code, format_code, require_valid
from .gf2 import PauliSpan, in_span, solve_gf2
from .pauli import PauliOperator, anticommutes, commutes, format_pauli, multiply, parse_pauli, product, symplectic

log = logging.getLogger(__name__)

# Budget (number of Pauli candidates) for exhaustive minimum-weight searches.
SEARCH_BUDGET = 4_000_000
# Cap on how many tied minimum-weight solutions are collected for tie-breaking.
TIE_LIMIT = 200_000
# Largest combination size tried when looking for sparse pivot combinations.
SPARSE_COMBO_CAP = 4
# Largest span dimension walked exhaustively when reducing modulo block A.
COSET_DIM_CAP = 20

# (x | z << 1) -> rank of I, X, Z, Y in the order I < X < Y < Z
_DENSE_RANK = (0, 1, 3, 2)


def dense_key(n: int, x: int, z: int) -> tuple[int, ...]:
    """Sort key giving lexicographic order of the dense string (I<X<Y<Z)."""
    return tuple(_DENSE_RANK[(x >> q & 1) | (z >> q & 1) << 1] for q in range(n))


# -- records -----------------------------------------------------------------

@dataclass(frozen=True)
class SharedElement:
    source_index: int
    target_index: int
    op: PauliOperator


@dataclass(frozen=True)
class AnticommutingPair:
    source_index: int
    target_index: int
    source_op: PauliOperator
    target_op: PauliOperator


@dataclass(frozen=True)
class ComplementRecord:
    index: int
    generator: PauliOperator
    complement: PauliOperator


OpLogEntry = tuple[str, int, int]  # (side, i, j): generator i <- generator i * generator j


@dataclass(frozen=True)
class BlockDecomposition:
    source: StabilizerCode
    target: StabilizerCode
    source_generators: tuple[PauliOperator, ...]
    target_generators: tuple[PauliOperator, ...]
    block_a: tuple[SharedElement, ...]
    block_b: tuple[ComplementRecord, ...]
    block_b_target: tuple[ComplementRecord, ...]
    block_c: tuple[AnticommutingPair, ...]
    op_log: tuple[OpLogEntry, ...]
    source_combos: tuple[int, ...]
    target_combos: tuple[int, ...]
    frame: PauliOperator | None = None

    @property
    def a(self) -> int:
        return len(self.block_a)

    @property
    def b(self) -> int:
        return len(self.block_b)

    @property
    def c(self) -> int:
        return len(self.block_c)

    @property
    def steps(self) -> int:
        return 2 * self.b + self.c


@dataclass(frozen=True)
class MeasurementStep:
    measure: PauliOperator
    correction: PauliOperator
    position: int = -1

    def __post_init__(self):
        if not anticommutes(self.measure, self.correction):
            raise CodeError(f"step measures {format_pauli(self.measure)} but corrects with the "
                            f"commuting {format_pauli(self.correction)}")


@dataclass(frozen=True)
class RewirePlan:
    steps: tuple[MeasurementStep, ...]
    intermediate_codes: tuple[StabilizerCode, ...]
    frame: PauliOperator | None = None
    decomposition: BlockDecomposition | None = field(default=None, compare=False, repr=False)

    @property
    def source(self) -> StabilizerCode:
        return self.intermediate_codes[0]

    @property
    def target(self) -> StabilizerCode:
        return self.intermediate_codes[-1]

    def __len__(self) -> int:
        return len(self.steps)

    def measured(self) -> list[PauliOperator]:
        return [s.measure for s in self.steps]


@dataclass(frozen=True)
class ConstraintSet:
    allowed: tuple[PauliOperator, ...]
    depth_bound: int = 8


@dataclass(frozen=True)
class PathSearchResult:
    verdict: str  # "found" | "necessary-condition-failed" | "not-found-within-bound"
    plan: RewirePlan | None = None
    explored: int = 0

    @property
    def found(self) -> bool:
        return self.plan is not None


# -- connectivity and reduction ---------------------------------------------------

def connectivity_matrix(G: Sequence[PauliOperator], Gp: Sequence[PauliOperator]) -> np.ndarray:
    """``M[i][j] = 1`` iff ``G[i]`` anticommutes with ``Gp[j]``."""
    if len(G) != len(Gp):
        raise CodeError(f"generator counts differ ({len(G)} vs {len(Gp)}); pad the shorter code first")
    m = np.zeros((len(G), len(Gp)), dtype=np.uint8)
    for i, g in enumerate(G):
        for j, h in enumerate(Gp):
            if g.n != h.n:
                raise CodeError("generators act on different numbers of qubits")
            m[i, j] = symplectic(g.x, g.z, h.x, h.z)
    return m


def _rows_as_ints(m: np.ndarray) -> list[int]:
    return [sum(int(v) << j for j, v in enumerate(row)) for row in m]


def _cols_as_ints(m: np.ndarray) -> list[int]:
    return _rows_as_ints(m.T)


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


class _Echelon:
    """Incremental GF(2) basis of int vectors with combination tracking."""

    def __init__(self):
        self.rows: dict[int, tuple[int, int]] = {}  # lead bit -> (vector, combo)

    def reduce(self, v: int, combo: int = 0) -> tuple[int, int]:
        while v:
            lead = v.bit_length() - 1
            if lead not in self.rows:
                break
            rv, rc = self.rows[lead]
            v ^= rv
            combo ^= rc
        return v, combo

    def reduce_full(self, v: int, combo: int = 0) -> tuple[int, int]:
        for lead in sorted(self.rows, reverse=True):
            if v >> lead & 1:
                rv, rc = self.rows[lead]
                v ^= rv
                combo ^= rc
        return v, combo

    def add(self, v: int, combo: int) -> bool:
        v, combo = self.reduce(v, combo)
        if not v:
            return False
        self.rows[v.bit_length() - 1] = (v, combo)
        return True


def _pivot_columns(cols: list[int]) -> tuple[list[int], dict[int, int]]:
    """Leftmost independent columns; coefficients expressing the others."""
    ech = _Echelon()
    pivots: list[int] = []
    express: dict[int, int] = {}
    for q, col in enumerate(cols):
        v, combo = ech.reduce(col, 0)
        if v:
            ech.add(col, 1 << len(pivots))
            pivots.append(q)
        else:
            # combo over pivot slots reproduces the column
            express[q] = sum(1 << pivots[s] for s in _bits(combo))
    return pivots, express


def _sparse_combination(rows: list[int], target: int) -> int:
    """Fewest rows XOR-ing to ``target``; ties -> largest descending index tuple."""
    r = len(rows)
    for size in range(1, min(SPARSE_COMBO_CAP, r) + 1):
        if comb(r, size) > 200_000:
            break
        best = None
        for idx in combinations(range(r - 1, -1, -1), size):
            acc = 0
            for i in idx:
                acc ^= rows[i]
            if acc == target:
                if best is None or idx > best:
                    best = idx
        if best is not None:
            return sum(1 << i for i in best)
    # general fallback: any solution of the linear system
    ncols = max((v.bit_length() for v in rows + [target]), default=0)
    a = np.array([[v >> c & 1 for v in rows] for c in range(ncols)], dtype=np.uint8).reshape(ncols, r)
    b = np.array([target >> c & 1 for c in range(ncols)], dtype=np.uint8)
    sol, _ = solve_gf2(a, b)
    if sol is None:
        raise CodeError("internal error: pivot combination does not exist")
    return sum(1 << i for i, v in enumerate(sol) if v)


def _choose_homes(combos: list[int]) -> list[int]:
    """Assign each combination a distinct home row so the transform is invertible.

    Processes combinations in order, picking the largest index whose column
    keeps the leading block invertible, preferring indices in the
    combination's own support.
    """
    homes: list[int] = []
    ech = _Echelon()  # over "home columns" space: restricted rows
    for p, u in enumerate(combos):
        # residual of row p on unchosen columns after eliminating chosen ones
        # via the rows already processed (Schur complement).
        residual = u
        chosen = homes[:]
        # Solve for coefficients on earlier rows matching u on chosen columns.
        if chosen:
            sub = [sum((combos[t] >> h & 1) << s for s, h in enumerate(chosen)) for t in range(p)]
            want = sum((u >> h & 1) << s for s, h in enumerate(chosen))
            e = _Echelon()
            for t, v in enumerate(sub):
                e.add(v, 1 << t)
            rest, coeff = e.reduce_full(want, 0)
            if rest:
                raise CodeError("internal error: leading block is singular")
            for t in _bits(coeff):
                residual ^= combos[t]
        for h in chosen:
            residual &= ~(1 << h)
        if not residual:
            raise CodeError("internal error: pivot combinations are dependent")
        own = residual & u
        pick = own if own else residual
        homes.append(pick.bit_length() - 1)
    return homes


@dataclass(frozen=True)
class Diagonalization:
    source_generators: tuple[PauliOperator, ...]
    target_generators: tuple[PauliOperator, ...]
    matrix: np.ndarray
    pairs: tuple[tuple[int, int], ...]  # (source index, target index) with M = 1
    op_log: tuple[OpLogEntry, ...]
    source_combos: tuple[int, ...]
    target_combos: tuple[int, ...]
    target_pivots: tuple[int, ...]


def _combo_ops(gens: Sequence[PauliOperator], combos: Sequence[int]) -> tuple[PauliOperator, ...]:
    n = gens[0].n if gens else 0
    return tuple(product((gens[j] for j in _bits(c)), n) for c in combos)


def combos_to_op_log(side: str, combos: Sequence[int]) -> list[OpLogEntry]:
    """Row additions that turn the identity into ``combos`` (rows as bitmasks)."""
    rows = list(combos)
    r = len(rows)
    elim: list[tuple[int, int]] = []  # (dst, src): row dst ^= row src

    def add(dst, src):
        rows[dst] ^= rows[src]
        elim.append((dst, src))

    for col in range(r):
        if not rows[col] >> col & 1:
            for i in range(col + 1, r):
                if rows[i] >> col & 1:
                    add(col, i)
                    break
            else:
                raise CodeError("combination matrix is singular")
        for i in range(r):
            if i != col and rows[i] >> col & 1:
                add(i, col)
    return [(side, dst, src) for dst, src in reversed(elim)]


def replay_op_log(G: Sequence[PauliOperator], Gp: Sequence[PauliOperator],
                  op_log: Iterable[OpLogEntry]) -> tuple[list[PauliOperator], list[PauliOperator]]:
    sides = {"source": list(G), "target": list(Gp)}
    for side, i, j in op_log:
        gens = sides[side]
        gens[i] = multiply(gens[i], gens[j])
    return sides["source"], sides["target"]


def diagonalize(G: Sequence[PauliOperator], Gp: Sequence[PauliOperator],
                target_pivots: Sequence[int] | None = None) -> Diagonalization:
    """Generator replacements making the connectivity matrix a partial permutation.

    Target pivots default to the leftmost independent columns; every other
    target column is cleared by multiplying in pivot generators.  Each pivot
    is then matched with the sparsest combination of source generators that
    anticommutes with it alone; the remaining source generators are cleared
    with those combinations.
    """
    m = connectivity_matrix(G, Gp)
    r = len(G)
    cols = _cols_as_ints(m)
    if target_pivots is None:
        pivots, express = _pivot_columns(cols)
    else:
        pivots = list(target_pivots)
        ech = _Echelon()
        for s, p in enumerate(pivots):
            if not ech.add(cols[p], 1 << s):
                raise CodeError(f"requested pivot column {p} is dependent")
        express = {}
        for q in range(r):
            if q in pivots:
                continue
            v, combo = ech.reduce_full(cols[q], 0)
            if v:
                raise CodeError("requested pivots do not span the column space")
            express[q] = sum(1 << pivots[s] for s in _bits(combo))
    target_combos = [1 << q for q in range(r)]
    for q, coeff in express.items():
        target_combos[q] |= coeff
    # rows restricted to pivot columns, as bits over pivot slots
    restricted = [sum((int(m[i, p]) << s) for s, p in enumerate(pivots)) for i in range(r)]
    u = [_sparse_combination(restricted, 1 << s) for s in range(len(pivots))]
    homes = _choose_homes(u)
    source_combos = [0] * r
    for s, h in enumerate(homes):
        source_combos[h] = u[s]
    for i in range(r):
        if i in homes:
            continue
        c = 1 << i
        for s in _bits(restricted[i]):
            c ^= u[s]
        source_combos[i] = c
    src = _combo_ops(G, source_combos)
    tgt = _combo_ops(Gp, target_combos)
    mat = connectivity_matrix(src, tgt)
    pairs = tuple((h, p) for h, p in zip(homes, pivots))
    op_log = combos_to_op_log("source", source_combos) + combos_to_op_log("target", target_combos)
    return Diagonalization(src, tgt, mat, pairs, tuple(op_log), tuple(source_combos),
                           tuple(target_combos), tuple(pivots))


# -- minimum-weight linear solutions --------------------------------------------------

def _search_cap(n: int) -> int:
    total, w = 0, 0
    while w < n:
        nxt = comb(n, w + 1) * 3 ** (w + 1)
        if total + nxt > SEARCH_BUDGET:
            break
        total += nxt
        w += 1
    return max(w, 1)


def _linear_system(n: int, cons: Sequence[PauliOperator], rhs: Sequence[int]):
    a = np.zeros((len(cons), 2 * n), dtype=np.uint8)
    for i, c in enumerate(cons):
        a[i, :n] = c.zbits()
        a[i, n:] = c.xbits()
    return a, np.array(list(rhs), dtype=np.uint8)


def min_weight_solutions(n: int, cons: Sequence[PauliOperator], rhs: Sequence[int]) -> list[tuple[int, int]]:
    """All minimum-weight ``(x, z)`` with prescribed commutation pattern.

    ``rhs[i] = 1`` asks for anticommutation with ``cons[i]``.  Exhaustive up
    to the search budget; beyond it the minimum over the affine solution
    space is taken (exhaustive when the null space is small).  Raises
    :class:`CodeError` when the system is inconsistent.
    """
    rhs_mask = sum(1 << i for i, v in enumerate(rhs) if v)
    cap = _search_cap(n)
    w, sols = kernels.weight_search(n, [c.x for c in cons], [c.z for c in cons], rhs_mask, [],
                                    min(cap, n), TIE_LIMIT)
    if w >= 0:
        return sols
    a, b = _linear_system(n, cons, rhs)
    sol, null = solve_gf2(a, b) if len(cons) else (np.zeros(2 * n, dtype=np.uint8), np.eye(2 * n, dtype=np.uint8))
    if sol is None:
        raise CodeError("no Pauli operator has the requested commutation pattern")

    def split(v):
        x = sum(int(v[q]) << q for q in range(n))
        z = sum(int(v[n + q]) << q for q in range(n))
        return x, z

    x0, z0 = split(sol)
    if len(null) > COSET_DIM_CAP + 6:
        log.warning("solution space too large for an exhaustive minimum; using a reduced solution")
        return [(x0, z0)]
    bx, bz = zip(*(split(v) for v in null)) if len(null) else ((), ())
    _, hits = kernels.coset_min_weight(n, x0, z0, list(bx), list(bz), TIE_LIMIT)
    return hits


def _lex_min(n: int, cands: Iterable[tuple[int, int]]) -> tuple[int, int]:
    return min(cands, key=lambda v: dense_key(n, v[0], v[1]))


def _reduce_mod_span(op: PauliOperator, basis: Sequence[PauliOperator]) -> int | None:
    """Combination mask (over ``basis``) strictly lowering ``op``'s weight, if any."""
    if not basis or len(basis) > COSET_DIM_CAP:
        return None
    n = op.n
    w, hits = kernels.coset_min_weight(n, op.x, op.z, [b.x for b in basis], [b.z for b in basis], 4096)
    if w >= op.weight:
        return None
    bx, bz = _lex_min(n, hits)
    span = PauliSpan(n, basis)
    combo = span.combination(PauliOperator(n, bx ^ op.x, bz ^ op.z))
    if combo is None:
        raise CodeError("internal error: coset representative outside the span")
    return sum(1 << i for i in combo)


# -- block decomposition --------------------------------------------------------------

def decompose_blocks(S: StabilizerCode, Sp: StabilizerCode,
                     target_pivots: Sequence[int] | None = None) -> BlockDecomposition:
    if S.n != Sp.n:
        raise CodeError(f"codes act on {S.n} and {Sp.n} qubits; pad the shorter one first")
    if S.k != Sp.k:
        raise CodeError(f"codes encode different numbers of logical qubits ({S.k} vs {Sp.k})")
    require_valid(S)
    require_valid(Sp)
    n = S.n
    G, Gp = list(S.generators), list(Sp.generators)
    r = len(G)
    diag = diagonalize(G, Gp, target_pivots)
    sc, tc = list(diag.source_combos), list(diag.target_combos)

    def sop(i):
        return product((G[j] for j in _bits(sc[i])), n)

    def top(i):
        return product((Gp[j] for j in _bits(tc[i])), n)

    homes = [h for h, _ in diag.pairs]
    pivots = [p for _, p in diag.pairs]
    ker_s = [i for i in range(r) if i not in homes]
    ker_t = [q for q in range(r) if q not in pivots]

    # A/B split via pairings with the other code's logical operators
    def split(kernel, combos, ops_of, other):
        logs = [op for pair in compute_logicals(other) for op in pair] if other.k else []
        ech: dict[int, tuple[int, int]] = {}
        a_idx, b_idx = [], []
        for i in kernel:
            op = ops_of(i)
            v = sum(symplectic(op.x, op.z, l.x, l.z) << t for t, l in enumerate(logs))
            while v:
                lead = v.bit_length() - 1
                if lead not in ech:
                    break
                rv, ri = ech[lead]
                v ^= rv
                combos[i] ^= combos[ri]
            if v:
                ech[v.bit_length() - 1] = (v, i)
                b_idx.append(i)
            else:
                a_idx.append(i)
        return a_idx, b_idx

    a_s, b_s = split(ker_s, sc, sop, Sp)
    a_t, b_t = split(ker_t, tc, top, S)
    if len(a_s) != len(a_t) or len(b_s) != len(b_t):
        raise CodeError("internal error: block sizes differ between the two sides")

    # re-express target A so it matches source A element-wise
    if a_s:
        t_ops = [top(q) for q in a_t]
        span = PauliSpan(n, t_ops)
        new = []
        for i in a_s:
            combo = span.combination(sop(i))
            if combo is None:
                raise CodeError("internal error: shared element missing from the target group")
            c = 0
            for t in combo:
                c ^= tc[a_t[t]]
            new.append(c)
        for q, c in zip(a_t, new):
            tc[q] = c

    # strictly lower the weight of B and C elements modulo block A
    a_ops = [sop(i) for i in a_s]
    for side_combos, idxs, ops_of, a_pos in ((sc, homes + b_s, sop, a_s), (tc, pivots + b_t, top, a_t)):
        for i in idxs:
            mask = _reduce_mod_span(ops_of(i), a_ops)
            if mask:
                for t in _bits(mask):
                    side_combos[i] ^= side_combos[a_pos[t]]

    # complementary operators
    src_comp = _complements(n, [sop(i) for i in b_s], list(Gp))
    tgt_comp = _target_complements(n, [top(q) for q in b_t], list(G), src_comp)

    # fix-ups: C elements anticommuting with a complement absorb its partner
    for combos, c_idx, b_idx, comps, ops_of in ((sc, homes, b_s, src_comp, sop), (tc, pivots, b_t, tgt_comp, top)):
        for k in c_idx:
            for j, comp in zip(b_idx, comps):
                if anticommutes(ops_of(k), comp):
                    combos[k] ^= combos[j]

    src_ops = [sop(i) for i in range(r)]
    tgt_ops = [top(q) for q in range(r)]
    block_a = tuple(SharedElement(i, q, src_ops[i]) for i, q in zip(a_s, a_t))
    mismatched = [q for i, q in zip(a_s, a_t) if src_ops[i] != tgt_ops[q]]
    frame = None
    if mismatched:
        rhs = [1 if q in mismatched else 0 for q in range(r)]
        fx, fz = _lex_min(n, min_weight_solutions(n, tgt_ops, rhs))
        frame = PauliOperator(n, fx, fz)
        log.info("shared stabilizers differ in sign; adding frame correction %s", format_pauli(frame))
    block_b = tuple(ComplementRecord(i, src_ops[i], c) for i, c in zip(b_s, src_comp))
    block_bt = tuple(ComplementRecord(q, tgt_ops[q], c) for q, c in zip(b_t, tgt_comp))
    block_c = tuple(AnticommutingPair(h, p, src_ops[h], tgt_ops[p]) for h, p in sorted(zip(homes, pivots), key=lambda hp: hp[1]))
    op_log = combos_to_op_log("source", sc) + combos_to_op_log("target", tc)
    return BlockDecomposition(S, Sp, tuple(src_ops), tuple(tgt_ops), block_a, block_b, block_bt, block_c,
                              tuple(op_log), tuple(sc), tuple(tc), frame)


def _complements(n: int, members: list[PauliOperator], other: list[PauliOperator]) -> list[PauliOperator]:
    """Minimum-weight complements: anticommute with the partner only.

    Constraints: commute with every generator of the other code, with the
    other members, and with complements chosen earlier.  Ties go to the
    lexicographically smallest dense string.
    """
    out: list[PauliOperator] = []
    for j, g in enumerate(members):
        cons = other + [m for t, m in enumerate(members) if t != j] + out + [g]
        rhs = [0] * (len(cons) - 1) + [1]
        x, z = _lex_min(n, min_weight_solutions(n, cons, rhs))
        out.append(PauliOperator(n, x, z))
    return out


def _target_complements(n: int, members: list[PauliOperator], other: list[PauliOperator],
                        partners: list[PauliOperator]) -> list[PauliOperator]:
    """Target-side complements chosen so the measured product is light.

    Same constraints as :func:`_complements`; among valid choices ``t`` the
    weight of ``s * t`` (``s`` the source partner's complement) is minimised
    first, then the weight of ``t``, then its dense string.
    """
    out: list[PauliOperator] = []
    for j, (g, s) in enumerate(zip(members, partners)):
        cons = other + [m for t, m in enumerate(members) if t != j] + out + [g]
        rhs = [0] * (len(cons) - 1) + [1]
        # search over q = s*t: shift the syndrome by s's own pattern
        shifted = [b ^ symplectic(s.x, s.z, c.x, c.z) for b, c in zip(rhs, cons)]
        qs = min_weight_solutions(n, cons, shifted)
        cands = [(qx ^ s.x, qz ^ s.z) for qx, qz in qs]
        x, z = min(cands, key=lambda v: ((v[0] | v[1]).bit_count(), dense_key(n, v[0], v[1])))
        out.append(PauliOperator(n, x, z))
    return out


def complementary_operators(decomp: BlockDecomposition) -> tuple[list[PauliOperator], list[PauliOperator]]:
    return [rec.complement for rec in decomp.block_b], [rec.complement for rec in decomp.block_b_target]


# -- plans ---------------------------------------------------------------------------

def measured_product(s: PauliOperator, t: PauliOperator) -> PauliOperator:
    p = multiply(s, t)
    return p if p.is_hermitian else p.hermitian()


def build_plan(decomp: BlockDecomposition) -> RewirePlan:
    """Two steps per B pair (complement product, then the target element),
    then one step per C pair, in target-generator order."""
    current = list(decomp.source_generators)
    src, tgt = decomp.source, decomp.target
    codes = [StabilizerCode(src.n, src.k, tuple(current), None, src.label)]
    steps: list[MeasurementStep] = []

    def record(pos, measure):
        steps.append(MeasurementStep(measure, current[pos], pos))
        current[pos] = measure
        codes.append(StabilizerCode(src.n, src.k, tuple(current), None,
                                    f"{src.label or 'source'}->{tgt.label or 'target'}#{len(steps)}"))

    for rec, rec_t in zip(decomp.block_b, decomp.block_b_target):
        prod = measured_product(rec.complement, rec_t.complement)
        record(rec.index, prod)
        record(rec.index, rec_t.generator)
    for pair in decomp.block_c:
        record(pair.source_index, pair.target_op)
    if steps:
        codes[-1] = codes[-1].relabel(tgt.label)
    return RewirePlan(tuple(steps), tuple(codes), decomp.frame, decomp)


def plan_rewire(source: StabilizerCode, target: StabilizerCode,
                target_pivots: Sequence[int] | None = None) -> RewirePlan:
    """Pad the shorter code with ancillas, decompose and build the plan."""
    if source.n < target.n:
        source = pad_with_ancillas(source, target.n - source.n)
    elif target.n < source.n:
        target = pad_with_ancillas(target, source.n - target.n)
    return build_plan(decompose_blocks(source, target, target_pivots))


def check_plan(plan: RewirePlan, strict: bool = True) -> list[str]:
    """Problems with the plan's structure (empty list when sound).

    ``strict`` additionally requires consecutive codes to differ in exactly
    the replaced generator, which holds for synthesized plans.
    """
    problems = []
    codes = plan.intermediate_codes
    if len(codes) != len(plan.steps) + 1:
        problems.append("intermediate code count does not match the step count")
        return problems
    from .codes import validate
    for i, code in enumerate(codes):
        rep = validate(code)
        if not rep.ok:
            problems.append(f"code {i}: {rep.summary()}")
    for i, step in enumerate(plan.steps):
        before, after = codes[i], codes[i + 1]
        if not anticommutes(step.measure, step.correction):
            problems.append(f"step {i}: measure commutes with correction")
        if step.correction not in before.generators:
            problems.append(f"step {i}: correction is not a generator of the pre-step code")
        if step.measure not in after.generators:
            problems.append(f"step {i}: measured operator missing from the post-step code")
        if strict:
            diff = [j for j, (a, b) in enumerate(zip(before.generators, after.generators)) if a != b]
            if len(diff) != 1 or not anticommutes(before.generators[diff[0]], after.generators[diff[0]]):
                problems.append(f"step {i}: codes do not differ by one anticommuting generator")
    return problems


# -- plan file format -------------------------------------------------------------------

def format_plan(plan: RewirePlan, intermediates: bool = True) -> str:
    src, tgt = plan.source.label or "source", plan.target.label or "target"
    lines = [f"from={src} to={tgt} steps={len(plan.steps)}"]
    for s in plan.steps:
        lines.append(f"measure {format_pauli(s.measure)} correct {format_pauli(s.correction)}")
    if plan.frame is not None:
        lines.append(f"frame {format_pauli(plan.frame)}")
    text = "\n".join(lines) + "\n"
    if intermediates:
        for code in plan.intermediate_codes:
            text += "intermediate:\n" + format_code(code)
    return text


def parse_plan(text: str, source: StabilizerCode | None = None) -> RewirePlan:
    """Parse a plan file; without intermediate blocks, ``source`` seeds the codes."""
    lines = text.splitlines()
    if not lines or not lines[0].startswith("from="):
        raise CodeError("plan file must start with 'from=<label> to=<label> steps=<N>'")
    head = dict(tok.split("=", 1) for tok in lines[0].split() if "=" in tok)
    try:
        count = int(head["steps"])
    except (KeyError, ValueError) as exc:
        raise CodeError("plan header lacks steps=<N>") from exc
    pairs, frame, blocks, cur = [], None, [], None
    for ln in lines[1:]:
        s = ln.split("#", 1)[0].strip()
        if not s:
            continue
        if s == "intermediate:":
            cur = []
            blocks.append(cur)
        elif cur is not None:
            cur.append(s)
        elif s.startswith("measure "):
            parts = s.split()
            if len(parts) < 4 or "correct" not in parts:
                raise CodeError(f"bad step line {s!r}")
            k = parts.index("correct")
            pairs.append((" ".join(parts[1:k]), " ".join(parts[k + 1:])))
        elif s.startswith("frame "):
            frame = s[6:].strip()
        else:
            raise CodeError(f"unrecognised plan line {s!r}")
    if len(pairs) != count:
        raise CodeError(f"header announces {count} steps, found {len(pairs)}")
    codes = [parse_code("\n".join(b)) for b in blocks]
    if codes:
        n = codes[0].n
    elif source is not None:
        n = source.n
    else:
        raise CodeError("plan has no intermediate codes; supply the source code")
    steps = []
    for i, (m, c) in enumerate(pairs):
        steps.append(MeasurementStep(parse_pauli(m, n), parse_pauli(c, n)))
    if not codes:
        codes = [source]
        for st in steps:
            base = _with_generator(codes[-1], st.correction)
            if len(codes) == 1:
                codes[0] = base
            codes.append(apply_measurement_to_code(base, st.measure, st.correction))
    if len(codes) != count + 1:
        raise CodeError(f"expected {count + 1} intermediate codes, found {len(codes)}")
    # recover replaced positions
    fixed = []
    for i, st in enumerate(steps):
        pos = next((j for j, g in enumerate(codes[i].generators) if g == st.correction), -1)
        fixed.append(MeasurementStep(st.measure, st.correction, pos))
    return RewirePlan(tuple(fixed), tuple(codes), parse_pauli(frame, n) if frame else None)


def load_plan(path: str | Path, source: StabilizerCode | None = None) -> RewirePlan:
    return parse_plan(Path(path).read_text(), source)


def save_plan(plan: RewirePlan, path: str | Path) -> None:
    Path(path).write_text(format_plan(plan))


def _with_generator(code: StabilizerCode, op: PauliOperator) -> StabilizerCode:
    """Same group, with ``op`` (a sign-exact group element) among the generators."""
    gens = list(code.generators)
    if op in gens:
        return code
    res = in_span(op, gens, track_sign=True)
    if not res.member or not res.sign_match:
        raise CodeError(f"correction {format_pauli(op)} is not an element of the stabilizer group")
    gens[res.combination[-1]] = op
    return StabilizerCode(code.n, code.k, tuple(gens), None, code.label)


def apply_measurement_to_code(code: StabilizerCode, measure: PauliOperator,
                              correction: PauliOperator | None = None) -> StabilizerCode:
    """Generator list after measuring ``measure`` and correcting on ``-1``.

    The replaced generator is ``correction`` when given (it must be one of
    the generators), otherwise the first anticommuting one; the other
    anticommuting generators absorb it so they commute with ``measure``.
    """
    gens = list(code.generators)
    anti = [i for i, g in enumerate(gens) if anticommutes(g, measure)]
    if not anti:
        raise CodeError(f"{format_pauli(measure)} commutes with every generator")
    if correction is not None:
        if correction not in gens:
            raise CodeError("correction is not a generator of the code")
        pos = gens.index(correction)
        if pos not in anti:
            raise CodeError("correction commutes with the measured operator")
    else:
        pos = anti[0]
    for i in anti:
        if i != pos:
            gens[i] = multiply(gens[i], gens[pos])
    gens[pos] = measure
    return StabilizerCode(code.n, code.k, tuple(gens), None, code.label)


# -- constrained search --------------------------------------------------------------

def group_fingerprint(gens: Sequence[PauliOperator]) -> tuple:
    """Sign-exact canonical form: reduced echelon rows of the group with signs."""
    if not gens:
        return ()
    n = gens[0].n
    rows: list[PauliOperator] = list(gens)
    out = []
    used = [False] * len(rows)
    for bit in range(2 * n - 1, -1, -1):
        piv = next((i for i, p in enumerate(rows) if not used[i] and p.vector() >> bit & 1), None)
        if piv is None:
            continue
        used[piv] = True
        for i, p in enumerate(rows):
            if i != piv and p.vector() >> bit & 1:
                rows[i] = multiply(p, rows[piv])
    for i, p in enumerate(rows):
        if used[i]:
            out.append((p.vector(), p.phase))
    return tuple(sorted(out, reverse=True))


MAX_CONSTRAINED_QUBITS = 10
MAX_CONSTRAINED_OPS = 16


def constrained_path_search(S: StabilizerCode, Sp: StabilizerCode, constraints: ConstraintSet) -> PathSearchResult:
    """Breadth-first search for a plan using only operators from ``allowed``."""
    if S.n != Sp.n or S.k != Sp.k:
        raise CodeError("constrained search needs codes with equal n and k")
    W = list(constraints.allowed)
    if S.n > MAX_CONSTRAINED_QUBITS and len(W) > MAX_CONSTRAINED_OPS:
        raise CodeError(f"instance too large for exhaustive search (n={S.n}, |W|={len(W)}); "
                        f"limits are n <= {MAX_CONSTRAINED_QUBITS} or |W| <= {MAX_CONSTRAINED_OPS}")
    for w in W:
        if w.n != S.n:
            raise CodeError("allowed operator acts on the wrong number of qubits")
        if not w.is_hermitian:
            raise CodeError("allowed operators must be Hermitian")
    span = PauliSpan(S.n, list(W) + list(S.generators))
    if not all(g in span for g in Sp.generators):
        return PathSearchResult("necessary-condition-failed")
    goal = group_fingerprint(Sp.generators)
    start = S.relabel(S.label)
    seen = {group_fingerprint(start.generators)}
    frontier = deque([(start, ())])
    explored = 0
    while frontier:
        code, path = frontier.popleft()
        explored += 1
        if group_fingerprint(code.generators) == goal:
            return PathSearchResult("found", _plan_from_path(S, Sp, path), explored)
        if len(path) >= constraints.depth_bound:
            continue
        cspan = code.span()
        for w in W:
            if w in cspan or all(commutes(w, g) for g in code.generators):
                continue
            nxt = apply_measurement_to_code(code, w)
            fp = group_fingerprint(nxt.generators)
            if fp in seen:
                continue
            seen.add(fp)
            frontier.append((nxt, path + ((w, code.generators[_first_anti(code, w)]),)))
    return PathSearchResult("not-found-within-bound", None, explored)


def _first_anti(code: StabilizerCode, w: PauliOperator) -> int:
    return next(i for i, g in enumerate(code.generators) if anticommutes(g, w))


def _plan_from_path(S: StabilizerCode, Sp: StabilizerCode, path) -> RewirePlan:
    codes = [S]
    steps = []
    for measure, correction in path:
        pos = codes[-1].generators.index(correction)
        steps.append(MeasurementStep(measure, correction, pos))
        codes.append(apply_measurement_to_code(codes[-1], measure, correction))
    if steps:
        codes[-1] = codes[-1].relabel(Sp.label)
    return RewirePlan(tuple(steps), tuple(codes))
