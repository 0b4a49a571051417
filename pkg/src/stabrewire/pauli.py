"""Pauli operators on n qubits in the binary symplectic representation.

An operator is stored as ``i**phase * P_1 (x) ... (x) P_n`` where each factor
``P_q`` is one of I, X, Y, Z (Y being the usual Hermitian Y).  The X- and
Z-parts are packed into Python ints, bit ``q`` standing for qubit ``q``
(0-based).  Text I/O uses 1-based qubit labels.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

_LETTERS = "IXZY"  # index = x_bit + 2*z_bit
_SPARSE_TOKEN = re.compile(r"^([IXYZ])(\d+)$")


class PauliError(ValueError):
    """Malformed or incompatible Pauli operator."""


@dataclass(frozen=True, slots=True)
class PauliOperator:
    """Immutable Pauli operator ``i**phase * X^x Z^z`` with Hermitian Y letters.

    The public constructor only accepts Hermitian operators (even ``phase``).
    Non-Hermitian intermediates come out of :func:`multiply` and are built via
    :meth:`_raw`.
    """

    n: int
    x: int
    z: int
    phase: int = 0

    def __post_init__(self) -> None:
        if self.n < 0:
            raise PauliError("qubit count must be non-negative")
        full = (1 << self.n) - 1
        if self.x & ~full or self.z & ~full or self.x < 0 or self.z < 0:
            raise PauliError(f"bit-vectors do not fit in {self.n} qubits")
        object.__setattr__(self, "phase", self.phase % 4)
        if self.phase % 2:
            raise PauliError("non-Hermitian Pauli (odd power of i)")

    @classmethod
    def _raw(cls, n: int, x: int, z: int, phase: int) -> "PauliOperator":
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "x", x)
        object.__setattr__(obj, "z", z)
        object.__setattr__(obj, "phase", phase % 4)
        return obj

    # -- constructors -------------------------------------------------
    @classmethod
    def identity(cls, n: int) -> "PauliOperator":
        return cls(n, 0, 0)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> "PauliOperator":
        """Single-qubit Pauli ``letter`` on 0-based ``qubit``."""
        code = _LETTERS.index(letter)
        x, z = code & 1, code >> 1
        return cls(n, x << qubit, z << qubit)

    @classmethod
    def from_string(cls, text: str, n: int | None = None) -> "PauliOperator":
        return parse_pauli(text, n)

    @classmethod
    def from_bits(cls, xbits: Sequence[int], zbits: Sequence[int], sign: int = 1) -> "PauliOperator":
        if len(xbits) != len(zbits):
            raise PauliError("x and z parts differ in length")
        x = sum(1 << q for q, b in enumerate(xbits) if b)
        z = sum(1 << q for q, b in enumerate(zbits) if b)
        return cls(len(xbits), x, z, 0 if sign > 0 else 2)

    # -- properties ---------------------------------------------------
    @property
    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    @property
    def sign(self) -> int:
        if not self.is_hermitian:
            raise PauliError("sign undefined for a non-Hermitian operator")
        return 1 if self.phase == 0 else -1

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    @property
    def support(self) -> tuple[int, ...]:
        s = self.x | self.z
        return tuple(q for q in range(self.n) if s >> q & 1)

    def letter(self, qubit: int) -> str:
        return _LETTERS[(self.x >> qubit & 1) | ((self.z >> qubit & 1) << 1)]

    def xbits(self) -> list[int]:
        return [self.x >> q & 1 for q in range(self.n)]

    def zbits(self) -> list[int]:
        return [self.z >> q & 1 for q in range(self.n)]

    def vector(self) -> int:
        """Sign-blind packed vector ``x | z << n``."""
        return self.x | (self.z << self.n)

    # -- derived operators --------------------------------------------
    def unsigned(self) -> "PauliOperator":
        return PauliOperator._raw(self.n, self.x, self.z, 0)

    def negated(self) -> "PauliOperator":
        return PauliOperator._raw(self.n, self.x, self.z, self.phase + 2)

    def hermitian(self) -> "PauliOperator":
        """Hermitian representative; odd-phase operators get multiplied by ``-i``."""
        if self.is_hermitian:
            return self
        return PauliOperator._raw(self.n, self.x, self.z, self.phase - 1)

    def padded(self, extra: int) -> "PauliOperator":
        return PauliOperator._raw(self.n + extra, self.x, self.z, self.phase)

    def permuted(self, perm: Sequence[int]) -> "PauliOperator":
        """Move the factor on qubit ``q`` to qubit ``perm[q]`` (0-based)."""
        x = z = 0
        for q in range(self.n):
            x |= (self.x >> q & 1) << perm[q]
            z |= (self.z >> q & 1) << perm[q]
        return PauliOperator._raw(self.n, x, z, self.phase)

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        return multiply(self, other)

    def __str__(self) -> str:
        return format_pauli(self)

    def __repr__(self) -> str:
        return f"PauliOperator('{format_pauli(self)}')"


def _check_pair(a: PauliOperator, b: PauliOperator) -> None:
    if a.n != b.n:
        raise PauliError(f"length mismatch: {a.n} vs {b.n} qubits")


def product_phase(n: int, x1: int, z1: int, x2: int, z2: int) -> int:
    """Power of i picked up by the letter-wise product of two Paulis."""
    full = (1 << n) - 1
    y1, y2 = x1 & z1, x2 & z2
    xo1, zo1 = x1 & ~z1 & full, z1 & ~x1 & full
    xo2, zo2 = x2 & ~z2 & full, z2 & ~x2 & full
    # XY = iZ, YZ = iX, ZX = iY and the reversed orders give -i
    plus = (xo1 & y2) | (y1 & zo2) | (zo1 & xo2)
    minus = (y1 & xo2) | (zo1 & y2) | (xo1 & zo2)
    return (plus.bit_count() - minus.bit_count()) % 4


def multiply(a: PauliOperator, b: PauliOperator) -> PauliOperator:
    """Phase-exact product ``a * b``."""
    _check_pair(a, b)
    ph = a.phase + b.phase + product_phase(a.n, a.x, a.z, b.x, b.z)
    return PauliOperator._raw(a.n, a.x ^ b.x, a.z ^ b.z, ph)


def product(ops: Iterable[PauliOperator], n: int | None = None) -> PauliOperator:
    """Ordered product of ``ops``; ``n`` is required for an empty product."""
    acc = None
    for p in ops:
        acc = p if acc is None else multiply(acc, p)
    if acc is None:
        if n is None:
            raise PauliError("empty product needs an explicit qubit count")
        return PauliOperator.identity(n)
    return acc


def symplectic(x1: int, z1: int, x2: int, z2: int) -> int:
    return ((x1 & z2) ^ (z1 & x2)).bit_count() & 1


def commutes(a: PauliOperator, b: PauliOperator) -> bool:
    _check_pair(a, b)
    return symplectic(a.x, a.z, b.x, b.z) == 0


def anticommutes(a: PauliOperator, b: PauliOperator) -> bool:
    return not commutes(a, b)


def weight(p: PauliOperator) -> int:
    return p.weight


def same_up_to_sign(a: PauliOperator, b: PauliOperator) -> bool:
    return a.n == b.n and a.x == b.x and a.z == b.z


# -- text format ------------------------------------------------------

def _split_sign(text: str) -> tuple[int, str]:
    text = text.strip()
    if text.startswith(("-", "−")):
        return 2, text[1:].strip()
    if text.startswith("+"):
        return 0, text[1:].strip()
    return 0, text


def parse_pauli(text: str, n: int | None = None) -> PauliOperator:
    """Parse dense (``-XIZZY``) or sparse (``X1 X3 Z5``) Pauli text.

    Sparse input uses 1-based qubit labels and needs ``n`` unless the
    largest label fixes it.  A lone ``I`` or empty body is the identity.
    """
    phase, body = _split_sign(text)
    if not body or (body == "I" and n is not None and n != 1):
        if n is None:
            raise PauliError("identity needs an explicit qubit count")
        return PauliOperator(n, 0, 0, phase)
    if re.fullmatch(r"[IXYZ]+", body):
        if n is not None and len(body) != n:
            raise PauliError(f"dense Pauli '{text}' has {len(body)} letters, expected {n}")
        x = z = 0
        for q, ch in enumerate(body):
            code = _LETTERS.index(ch)
            x |= (code & 1) << q
            z |= (code >> 1) << q
        return PauliOperator(len(body), x, z, phase)
    x = z = 0
    top = 0
    seen = set()
    for tok in body.replace(",", " ").split():
        m = _SPARSE_TOKEN.match(tok)
        if not m:
            raise PauliError(f"bad Pauli token '{tok}' in '{text}'")
        q = int(m.group(2)) - 1
        if q < 0:
            raise PauliError("qubit labels are 1-based")
        if q in seen:
            raise PauliError(f"qubit {q + 1} appears twice in '{text}'")
        seen.add(q)
        code = _LETTERS.index(m.group(1))
        x |= (code & 1) << q
        z |= (code >> 1) << q
        top = max(top, q + 1)
    if n is None:
        n = top
    elif top > n:
        raise PauliError(f"'{text}' acts on qubit {top} but n={n}")
    return PauliOperator(n, x, z, phase)


def format_pauli(p: PauliOperator, sparse: bool = False) -> str:
    prefix = {0: "", 1: "i", 2: "-", 3: "-i"}[p.phase]
    if sparse:
        toks = [f"{p.letter(q)}{q + 1}" for q in p.support]
        return prefix + (" ".join(toks) if toks else "I")
    return prefix + "".join(p.letter(q) for q in range(p.n))
