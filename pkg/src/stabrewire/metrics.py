"""Code distance, path distance profiles and subsystem-code bounds."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from . import kernels
from .codes import CodeError, StabilizerCode, SubsystemCode, require_valid
from .gf2 import PauliSpan
from .pauli import PauliOperator, commutes, format_pauli, multiply
from .planner import BlockDecomposition, RewirePlan, measured_product

log = logging.getLogger(__name__)

MAX_ENUMERATED_B = 12


@dataclass(frozen=True)
class DistanceReport:
    distance: int | None  # None: nothing found up to searched_weight
    witness: PauliOperator | None
    searched_weight: int
    label: str = ""

    @property
    def found(self) -> bool:
        return self.distance is not None

    @property
    def correctable(self) -> int | None:
        """t with d = 2t + 1 (floor for even d)."""
        return None if self.distance is None else (self.distance - 1) // 2

    def distance_text(self) -> str:
        return str(self.distance) if self.found else f">{self.searched_weight}"

    def format(self) -> str:
        wit = format_pauli(self.witness) if self.witness is not None else "none"
        return f"code={self.label} distance={self.distance_text()} witness={wit} searched={self.searched_weight}"

    def at_least(self, d: int) -> bool:
        """True when the true distance is provably >= d."""
        return self.distance >= d if self.found else self.searched_weight >= d - 1


def _dressed_search(n: int, commute_with: Sequence[PauliOperator], exclude: Sequence[PauliOperator],
                    max_weight: int, label: str) -> DistanceReport:
    span = PauliSpan(n, exclude)
    excl = span.echelon()
    w, sols = kernels.weight_search(n, [g.x for g in commute_with], [g.z for g in commute_with], 0,
                                    excl, max_weight, 1)
    if w < 0:
        return DistanceReport(None, None, max_weight, label)
    x, z = sols[0]
    return DistanceReport(w, PauliOperator(n, x, z), max_weight, label)


def code_distance(code: StabilizerCode, max_weight: int = 4) -> DistanceReport:
    """Minimum weight of a logical operator, searched exhaustively by weight.

    Supports are scanned in increasing order, letters X, Y, Z per qubit; the
    first hit is the witness.  A ``None`` distance means every operator of
    weight <= ``max_weight`` is either detected or a stabilizer.
    """
    if code.k < 1:
        raise CodeError("code encodes no logical qubits; distance is undefined")
    require_valid(code)
    return _dressed_search(code.n, code.generators, code.generators, min(max_weight, code.n), code.label)


def verify_witness(code: StabilizerCode, report: DistanceReport) -> bool:
    """Independent re-check of a witness: commutes, not a stabilizer, right weight."""
    w = report.witness
    if w is None:
        return not report.found
    if w.weight != report.distance:
        return False
    return all(commutes(w, g) for g in code.generators) and w not in PauliSpan(code.n, code.generators)


def path_distance_profile(plan: RewirePlan, max_weight: int = 4, jobs: int = 1) -> list[DistanceReport]:
    codes = list(plan.intermediate_codes)
    if jobs > 1:
        with ThreadPoolExecutor(jobs) as pool:
            return list(pool.map(lambda c: code_distance(c, max_weight), codes))
    return [code_distance(c, max_weight) for c in codes]


# -- subsystem codes ---------------------------------------------------------------

def _independent(n: int, ops: Sequence[PauliOperator]) -> list[PauliOperator]:
    span = PauliSpan(n)
    return [p for p in ops if span.add(p)]


def joint_subsystem_code(decomp: BlockDecomposition) -> SubsystemCode:
    """Stabilizers G_A; gauge group generated by G_A, G_C and G_C'."""
    if decomp.b:
        raise CodeError("joint subsystem code needs an empty B block")
    n = decomp.source.n
    stabs = [e.op for e in decomp.block_a]
    gauge = stabs + [p.source_op for p in decomp.block_c] + [p.target_op for p in decomp.block_c]
    return SubsystemCode.build(n, stabs, _independent(n, gauge), label="joint",
                               naive_logical_bound=n - (decomp.a + decomp.c))


def enumerate_subsystem_codes(decomp: BlockDecomposition) -> list[SubsystemCode]:
    """The 2^b subsystem codes of the B-block bound, one per choice of side.

    Choice bit j picks the source element (0) or the target element (1) of
    the j-th B pair; every code also contains the complement products.
    """
    b = decomp.b
    if b > MAX_ENUMERATED_B:
        raise CodeError(f"b={b} exceeds the enumeration limit of {MAX_ENUMERATED_B}")
    n = decomp.source.n
    stabs = [e.op for e in decomp.block_a]
    products = [measured_product(s.complement, t.complement)
                for s, t in zip(decomp.block_b, decomp.block_b_target)]
    cblock = [p.source_op for p in decomp.block_c] + [p.target_op for p in decomp.block_c]
    out = []
    for choice in range(1 << b):
        chosen = [decomp.block_b_target[j].generator if choice >> j & 1 else decomp.block_b[j].generator
                  for j in range(b)]
        gauge = _independent(n, stabs + chosen + products + cblock)
        out.append(SubsystemCode.build(n, stabs, gauge, label=f"choice{choice:0{max(b, 1)}b}",
                                       choice=choice,
                                       naive_logical_bound=n - (decomp.a + 2 * b + decomp.c)))
    return out


def subsystem_distance(sc: SubsystemCode, max_weight: int = 4) -> DistanceReport:
    """Dressed distance: commutes with the stabilizers, outside the gauge group."""
    if sc.k_logical < 1:
        raise CodeError("subsystem code has no logical qubits")
    return _dressed_search(sc.n, sc.stabilizer_generators, sc.gauge_generators,
                           min(max_weight, sc.n), sc.label)


def is_gauge_fixing(code: StabilizerCode, sc: SubsystemCode) -> bool:
    if code.n != sc.n:
        raise CodeError("code and subsystem code act on different numbers of qubits")
    gspan = sc.gauge_span()
    if not all(g in gspan for g in code.generators):
        return False
    cspan = code.span()
    return all(s in cspan for s in sc.stabilizer_generators)


def format_report(report: DistanceReport) -> str:
    return report.format()
