"""Stabilizer and subsystem code value objects.

Codes never mutate; every transform returns a new code.  Generator and
qubit indices are 0-based in the API and 1-based in files.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .gf2 import PauliSpan, gf2_rank, nullspace_gf2, rank_of
from .pauli import PauliError, PauliOperator, commutes, format_pauli, multiply, parse_pauli, symplectic


class CodeError(ValueError):
    """Invalid code, transform arguments or code file."""


LogicalPair = tuple[PauliOperator, PauliOperator]


@dataclass(frozen=True)
class StabilizerCode:
    n: int
    k: int
    generators: tuple[PauliOperator, ...]
    logicals: tuple[LogicalPair, ...] | None = None
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        if self.logicals is not None:
            object.__setattr__(self, "logicals", tuple(tuple(p) for p in self.logicals))
        for g in self.generators:
            if g.n != self.n:
                raise CodeError(f"generator {g} does not act on {self.n} qubits")

    @classmethod
    def from_strings(cls, gens: Sequence[str], n: int | None = None, label: str = "",
                     k: int | None = None) -> "StabilizerCode":
        ops = [parse_pauli(s, n) for s in gens]
        if n is None:
            if not ops:
                raise CodeError("cannot infer n from an empty generator list")
            n = max(p.n for p in ops)
            ops = [p if p.n == n else parse_pauli(s, n) for p, s in zip(ops, gens)]
        if k is None:
            k = n - len(ops)
        return cls(n, k, tuple(ops), None, label)

    @property
    def r(self) -> int:
        return len(self.generators)

    def with_logicals(self, logicals: Sequence[LogicalPair] | None = None) -> "StabilizerCode":
        if logicals is None:
            logicals = compute_logicals(self)
        return replace(self, logicals=tuple(logicals))

    def relabel(self, label: str) -> "StabilizerCode":
        return replace(self, label=label)

    def span(self) -> PauliSpan:
        return PauliSpan(self.n, self.generators)

    def same_group(self, other: "StabilizerCode") -> bool:
        """Sign-blind equality of the stabilizer groups."""
        if self.n != other.n:
            return False
        a, b = self.span(), other.span()
        return a.rank == b.rank and all(g in a for g in other.generators)

    def strings(self) -> list[str]:
        return [format_pauli(g) for g in self.generators]


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    problems: tuple[str, ...] = ()
    anticommuting: tuple[tuple[int, int], ...] = ()
    dependent: tuple[int, ...] = ()
    rank: int = 0

    def __bool__(self) -> bool:
        return self.ok

    def summary(self) -> str:
        if self.ok:
            return "valid"
        return "; ".join(self.problems)


def validate(code: StabilizerCode) -> ValidationReport:
    """Check commutation, independence, k bookkeeping and logical pairs."""
    problems = []
    gens = code.generators
    anti = []
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            if not commutes(gens[i], gens[j]):
                anti.append((i, j))
    for i, j in anti:
        problems.append(f"generators {i} and {j} anticommute")
    dependent = []
    span = PauliSpan(code.n)
    for i, g in enumerate(gens):
        if not g.is_hermitian:
            problems.append(f"generator {i} is not Hermitian")
        if g.x == 0 and g.z == 0:
            problems.append(f"generator {i} is the identity")
        if not span.add(g):
            dependent.append(i)
    if dependent:
        problems.append("rank deficient: generators " + ", ".join(map(str, dependent)) + " are dependent")
    if code.n - len(gens) != code.k and not dependent:
        problems.append(f"k={code.k} but n - #generators = {code.n - len(gens)}")
    if dependent and code.n - span.rank != code.k:
        problems.append(f"k={code.k} but n - rank = {code.n - span.rank}")
    if code.logicals is not None:
        problems.extend(_check_logicals(code, span))
    return ValidationReport(not problems, tuple(problems), tuple(anti), tuple(dependent), span.rank)


def _check_logicals(code: StabilizerCode, span: PauliSpan) -> list[str]:
    out = []
    pairs = code.logicals
    if len(pairs) != code.k:
        out.append(f"expected {code.k} logical pairs, found {len(pairs)}")
    flat = [(j, "X", p[0]) for j, p in enumerate(pairs)] + [(j, "Z", p[1]) for j, p in enumerate(pairs)]
    for j, kind, op in flat:
        for i, g in enumerate(code.generators):
            if not commutes(op, g):
                out.append(f"logical {kind}{j} anticommutes with generator {i}")
        if op in span:
            out.append(f"logical {kind}{j} lies in the stabilizer group")
    for a, ka, pa in flat:
        for b, kb, pb in flat:
            if (a, ka) >= (b, kb):
                continue
            anti = not commutes(pa, pb)
            want = a == b and ka != kb
            if anti != want:
                rel = "anticommutes" if anti else "commutes"
                out.append(f"logical {ka}{a} {rel} with logical {kb}{b}")
    return out


def require_valid(code: StabilizerCode) -> None:
    rep = validate(code)
    if not rep.ok:
        raise CodeError(f"invalid code {code.label or ''}: {rep.summary()}")


def normalizer_basis(n: int, gens: Sequence[PauliOperator]) -> list[PauliOperator]:
    """Basis of all Paulis commuting with ``gens`` (sign-blind, reduced form)."""
    # p commutes with g  <=>  g.z . p.x + g.x . p.z = 0
    a = np.zeros((len(gens), 2 * n), dtype=np.uint8)
    for i, g in enumerate(gens):
        a[i, :n] = g.zbits()
        a[i, n:] = g.xbits()
    if not len(gens):
        a = np.zeros((0, 2 * n), dtype=np.uint8)
    basis = nullspace_gf2(a)
    return [PauliOperator.from_bits(v[:n], v[n:]) for v in basis]


def compute_logicals(code: StabilizerCode) -> list[LogicalPair]:
    """Deterministic logical pairs ``(X_j, Z_j)``.

    Normalizer basis from the reduced null space, reduced modulo the
    stabilizer group in order, then paired by symplectic Gram-Schmidt.
    """
    require_valid(replace(code, logicals=None))
    n = code.n
    span = PauliSpan(n, code.generators)
    reps = []
    for v in normalizer_basis(n, code.generators):
        if span.add(v):
            reps.append(v)
    pairs: list[LogicalPair] = []
    pool = [(v.x, v.z) for v in reps]
    while pool:
        vx, vz = pool.pop(0)
        for idx, (wx, wz) in enumerate(pool):
            if symplectic(vx, vz, wx, wz):
                break
        else:
            raise CodeError("logical basis is degenerate (internal error)")
        wx, wz = pool.pop(idx)
        rest = []
        for ux, uz in pool:
            if symplectic(ux, uz, wx, wz):
                ux, uz = ux ^ vx, uz ^ vz
            if symplectic(ux, uz, vx, vz):
                ux, uz = ux ^ wx, uz ^ wz
            rest.append((ux, uz))
        pool = rest
        a = PauliOperator(n, vx, vz)
        b = PauliOperator(n, wx, wz)
        # prefer a pure-Z operator in the Z slot
        if a.x == 0 and b.x != 0:
            a, b = b, a
        pairs.append((a, b))
    if len(pairs) != code.k:
        raise CodeError(f"found {len(pairs)} logical pairs, expected k={code.k}")
    return pairs


def replace_generator(code: StabilizerCode, i: int, j: int) -> StabilizerCode:
    """Replace generator ``i`` by ``g_i g_j``."""
    r = len(code.generators)
    if not (0 <= i < r and 0 <= j < r):
        raise IndexError(f"generator index out of range for {r} generators")
    if i == j:
        raise CodeError("cannot multiply a generator by itself")
    gens = list(code.generators)
    gens[i] = multiply(gens[i], gens[j])
    return replace(code, generators=tuple(gens))


def pad_with_ancillas(code: StabilizerCode, m: int, placement: str = "append") -> StabilizerCode:
    """Add ``m`` qubits, each stabilized by a single-qubit Z."""
    if m < 0:
        raise CodeError("cannot pad with a negative number of qubits")
    if m == 0:
        return code
    n = code.n + m
    if placement == "append":
        shift, fresh = 0, range(code.n, n)
    elif placement == "prepend":
        shift, fresh = m, range(m)
    else:
        raise CodeError(f"unknown placement {placement!r}")

    def lift(p: PauliOperator) -> PauliOperator:
        return PauliOperator._raw(n, p.x << shift, p.z << shift, p.phase)

    gens = [lift(g) for g in code.generators] + [PauliOperator.single(n, q, "Z") for q in fresh]
    logs = None
    if code.logicals is not None:
        logs = tuple((lift(a), lift(b)) for a, b in code.logicals)
    return StabilizerCode(n, code.k, tuple(gens), logs, code.label)


def permute_qubits(code: StabilizerCode, permutation: Sequence[int]) -> StabilizerCode:
    """Relabel qubits: qubit ``i`` (1-based) moves to ``permutation[i-1]``."""
    perm = [int(p) - 1 for p in permutation]
    if sorted(perm) != list(range(code.n)):
        raise CodeError(f"not a permutation of 1..{code.n}: {list(permutation)}")
    gens = tuple(g.permuted(perm) for g in code.generators)
    logs = None
    if code.logicals is not None:
        logs = tuple((a.permuted(perm), b.permuted(perm)) for a, b in code.logicals)
    return StabilizerCode(code.n, code.k, gens, logs, code.label)


# -- subsystem codes ------------------------------------------------------

@dataclass(frozen=True)
class SubsystemCode:
    n: int
    stabilizer_generators: tuple[PauliOperator, ...]
    gauge_generators: tuple[PauliOperator, ...]
    k_logical: int
    r_gauge: int
    label: str = ""
    metadata: dict = field(default_factory=dict, compare=False)

    @classmethod
    def build(cls, n: int, stabilizers: Sequence[PauliOperator], gauge: Sequence[PauliOperator],
              label: str = "", **metadata) -> "SubsystemCode":
        """Derive ``r`` and ``k`` from the gauge group's symplectic structure."""
        stabs = tuple(stabilizers)
        gauge_t = tuple(gauge)
        gspan = PauliSpan(n)
        indep = [g for g in gauge_t if gspan.add(g)]
        gram = np.array([[symplectic(a.x, a.z, b.x, b.z) for b in indep] for a in indep],
                        dtype=np.uint8).reshape(len(indep), len(indep))
        sym_rank = gf2_rank(gram) if len(indep) else 0
        r = sym_rank // 2
        center = len(indep) - sym_rank
        k = n - center - r
        return cls(n, stabs, gauge_t, k, r, label, dict(metadata))

    @property
    def s(self) -> int:
        return rank_of(self.stabilizer_generators) if self.stabilizer_generators else 0

    def gauge_span(self) -> PauliSpan:
        return PauliSpan(self.n, self.gauge_generators)


def validate_subsystem(sc: SubsystemCode) -> ValidationReport:
    problems = []
    span = sc.gauge_span()
    for i, s in enumerate(sc.stabilizer_generators):
        if s not in span:
            problems.append(f"stabilizer {i} is not in the gauge group")
        for j, g in enumerate(sc.gauge_generators):
            if not commutes(s, g):
                problems.append(f"stabilizer {i} anticommutes with gauge generator {j}")
    if span.rank != sc.s + 2 * sc.r_gauge:
        problems.append(f"gauge rank {span.rank} != s + 2r = {sc.s + 2 * sc.r_gauge}")
    return ValidationReport(not problems, tuple(problems), rank=span.rank)


# -- file format ------------------------------------------------------------

def format_code(code: StabilizerCode) -> str:
    lines = [f"n={code.n} k={code.k} label={code.label}"]
    lines += [format_pauli(g) for g in code.generators]
    if code.logicals is not None:
        lines.append("logicals:")
        for a, b in code.logicals:
            lines.append(format_pauli(a))
            lines.append(format_pauli(b))
    return "\n".join(lines) + "\n"


def _parse_header(line: str) -> dict[str, str]:
    out = {}
    rest = line.strip()
    if "label=" in rest:
        rest, label = rest.split("label=", 1)
        out["label"] = label.strip()
    for tok in rest.split():
        if "=" not in tok:
            raise CodeError(f"bad header token {tok!r}")
        key, val = tok.split("=", 1)
        out[key] = val
    return out


def parse_code(text: str) -> StabilizerCode:
    lines = [ln.split("#", 1)[0].rstrip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln.strip()]
    if not lines:
        raise CodeError("empty code file")
    head = _parse_header(lines[0])
    try:
        n, k = int(head["n"]), int(head["k"])
    except (KeyError, ValueError) as exc:
        raise CodeError(f"header must carry n=<int> k=<int>: {lines[0]!r}") from exc
    gens, logs = [], []
    target = gens
    for ln in lines[1:]:
        if ln.strip() == "logicals:":
            target = logs
            continue
        try:
            target.append(parse_pauli(ln, n))
        except PauliError as exc:
            raise CodeError(str(exc)) from exc
    if len(logs) % 2:
        raise CodeError("logicals section needs alternating X/Z lines")
    pairs = tuple((logs[i], logs[i + 1]) for i in range(0, len(logs), 2)) if logs or any(
        ln.strip() == "logicals:" for ln in lines) else None
    return StabilizerCode(n, k, tuple(gens), pairs, head.get("label", ""))


def load_code(path: str | Path) -> StabilizerCode:
    return parse_code(Path(path).read_text())


def save_code(code: StabilizerCode, path: str | Path) -> None:
    Path(path).write_text(format_code(code))
