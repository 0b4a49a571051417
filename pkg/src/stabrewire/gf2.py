"""Linear algebra over GF(2).

Dense matrices are ``numpy.uint8`` arrays.  Spans of Pauli operators are
handled with packed ints (see :class:`PauliSpan`), which is what the
planner and the metrics use in their inner loops.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .pauli import PauliOperator, multiply, PauliError

RowOp = tuple[str, int, int]  # ("swap", i, j) or ("add", src, dst): row dst += row src


def as_binary(m) -> np.ndarray:
    a = np.asarray(m, dtype=np.uint8)
    if a.ndim != 2:
        a = a.reshape(len(a), -1) if a.size else np.zeros((len(a), 0), np.uint8)
    return a & 1


def row_reduce_mod2(m, full: bool = True) -> tuple[np.ndarray, list[RowOp], int]:
    """Row-echelon form of ``m`` over GF(2).

    Returns the reduced matrix, the log of row operations that turns ``m``
    into it (replay with :func:`apply_row_ops`) and the rank.  With
    ``full=True`` the result is in reduced row-echelon form.
    """
    a = as_binary(m).copy()
    rows, cols = a.shape
    ops: list[RowOp] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        hits = np.nonzero(a[r:, c])[0]
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
            ops.append(("swap", r, p))
        targets = np.nonzero(a[:, c])[0] if full else r + 1 + np.nonzero(a[r + 1:, c])[0]
        for t in targets:
            t = int(t)
            if t != r:
                a[t] ^= a[r]
                ops.append(("add", r, t))
        r += 1
    return a, ops, r


def apply_row_ops(m, ops: Sequence[RowOp]) -> np.ndarray:
    a = as_binary(m).copy()
    for kind, i, j in ops:
        if kind == "swap":
            a[[i, j]] = a[[j, i]]
        else:
            a[j] ^= a[i]
    return a


def gf2_rank(m) -> int:
    return row_reduce_mod2(m, full=False)[2]


def pivot_columns(m) -> list[int]:
    red, _, rank = row_reduce_mod2(m)
    piv = []
    for r in range(rank):
        piv.append(int(np.nonzero(red[r])[0][0]))
    return piv


def nullspace_gf2(a) -> np.ndarray:
    """Basis (as rows) of ``{x : A x = 0}``."""
    a = as_binary(a)
    cols = a.shape[1]
    red, _, rank = row_reduce_mod2(a)
    piv = [int(np.nonzero(red[r])[0][0]) for r in range(rank)]
    free = [c for c in range(cols) if c not in set(piv)]
    basis = np.zeros((len(free), cols), dtype=np.uint8)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, pc in enumerate(piv):
            basis[i, pc] = red[r, f]
    return basis


def solve_gf2(a, b) -> tuple[np.ndarray | None, np.ndarray]:
    """Solve ``A x = b`` over GF(2).

    Returns ``(x, null)`` where ``x`` is a particular solution (``None`` when
    the system is inconsistent) and ``null`` holds a basis of the homogeneous
    solutions as rows.
    """
    a = as_binary(a)
    b = np.asarray(b, dtype=np.uint8).reshape(-1) & 1
    if a.shape[0] != b.shape[0]:
        raise ValueError(f"A has {a.shape[0]} rows but b has length {b.shape[0]}")
    cols = a.shape[1]
    aug = np.concatenate([a, b[:, None]], axis=1)
    red, _, rank = row_reduce_mod2(aug)
    null = nullspace_gf2(a)
    piv = [int(np.nonzero(red[r])[0][0]) for r in range(rank)]
    if piv and piv[-1] == cols:
        return None, null
    x = np.zeros(cols, dtype=np.uint8)
    for r, pc in enumerate(piv):
        x[pc] = red[r, cols]
    return x, null


def matmul_mod2(a, b) -> np.ndarray:
    return (as_binary(a).astype(np.int64) @ as_binary(b).astype(np.int64) % 2).astype(np.uint8)


# -- int-packed spans --------------------------------------------------

class PauliSpan:
    """Incremental echelon basis for the sign-blind span of Pauli operators.

    Each stored row remembers which input operators it combines, so that a
    membership query can return the combination as well.
    """

    def __init__(self, n: int, ops: Sequence[PauliOperator] = ()):
        self.n = n
        self.inputs: list[PauliOperator] = []
        self._rows: dict[int, tuple[int, int]] = {}  # pivot bit -> (vector, combo mask)
        for p in ops:
            self.add(p)

    def __len__(self) -> int:
        return len(self._rows)

    @property
    def rank(self) -> int:
        return len(self._rows)

    def _reduce(self, v: int) -> tuple[int, int]:
        combo = 0
        while v:
            top = v.bit_length() - 1
            row = self._rows.get(top)
            if row is None:
                break
            v ^= row[0]
            combo ^= row[1]
        return v, combo

    def _reduce_full(self, v: int) -> tuple[int, int]:
        combo = 0
        rest = 0
        while v:
            top = v.bit_length() - 1
            row = self._rows.get(top)
            if row is None:
                rest |= 1 << top
                v ^= 1 << top
                continue
            v ^= row[0]
            combo ^= row[1]
        return rest, combo

    def add(self, p: PauliOperator) -> bool:
        """Append ``p``; returns False (and still records it) if dependent."""
        if p.n != self.n:
            raise PauliError("length mismatch in span")
        idx = len(self.inputs)
        self.inputs.append(p)
        rest, combo = self._reduce_full(p.vector())
        if rest == 0:
            return False
        self._rows[rest.bit_length() - 1] = (rest, combo ^ (1 << idx))
        return True

    def contains_vector(self, v: int) -> bool:
        return self._reduce_full(v)[0] == 0

    def combination(self, p: PauliOperator) -> list[int] | None:
        rest, combo = self._reduce_full(p.vector())
        if rest:
            return None
        return [i for i in range(len(self.inputs)) if combo >> i & 1]

    def __contains__(self, p: PauliOperator) -> bool:
        return self.contains_vector(p.vector())

    def echelon(self) -> list[tuple[int, int]]:
        """(pivot bit, vector) pairs, highest pivot first."""
        return sorted(((k, r[0]) for k, r in self._rows.items()), reverse=True)


@dataclass(frozen=True)
class SpanMembership:
    member: bool
    combination: tuple[int, ...] | None = None
    sign_match: bool | None = None
    product: PauliOperator | None = None


def in_span(candidate: PauliOperator, basis: Sequence[PauliOperator], track_sign: bool = False) -> SpanMembership:
    """Decide whether ``candidate`` lies in the group generated by ``basis``.

    Sign-blind by default.  With ``track_sign`` the product of the returned
    combination (taken in index order) is compared with ``candidate``
    including its phase.
    """
    span = PauliSpan(candidate.n, basis)
    combo = span.combination(candidate)
    if combo is None:
        return SpanMembership(False)
    if not track_sign:
        return SpanMembership(True, tuple(combo))
    prod = PauliOperator.identity(candidate.n)
    for i in combo:
        prod = multiply(prod, basis[i])
    return SpanMembership(True, tuple(combo), prod.phase == candidate.phase, prod)


def rank_of(ops: Sequence[PauliOperator]) -> int:
    if not ops:
        return 0
    return PauliSpan(ops[0].n, ops).rank


def pauli_matrix(ops: Sequence[PauliOperator], n: int | None = None) -> np.ndarray:
    """Stack operators as rows ``[x | z]``."""
    if n is None:
        n = ops[0].n if ops else 0
    out = np.zeros((len(ops), 2 * n), dtype=np.uint8)
    for i, p in enumerate(ops):
        out[i, :n] = p.xbits()
        out[i, n:] = p.zbits()
    return out


def symplectic_gram(rows: Sequence[PauliOperator], cols: Sequence[PauliOperator]) -> np.ndarray:
    """``out[i, j] = 1`` iff ``rows[i]`` anticommutes with ``cols[j]``."""
    out = np.zeros((len(rows), len(cols)), dtype=np.uint8)
    for i, a in enumerate(rows):
        for j, b in enumerate(cols):
            out[i, j] = ((a.x & b.z) ^ (a.z & b.x)).bit_count() & 1
    return out
