"""Stabilizer-tableau simulation of measurement plans.

Rows are stored as raw ``(x, z, phase)`` ints (phase = power of i, always
even for tableau rows) so the inner loops stay in integer arithmetic.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .codes import CodeError, StabilizerCode, compute_logicals
from .gf2 import PauliSpan, in_span, solve_gf2
from .pauli import PauliOperator, anticommutes, format_pauli, multiply, product, product_phase, symplectic
from .planner import MeasurementStep, RewirePlan, group_fingerprint


class SimulationError(RuntimeError):
    """Precondition or verification failure during simulation."""


def _mul(n, ax, az, ap, bx, bz, bp):
    return ax ^ bx, az ^ bz, (ap + bp + product_phase(n, ax, az, bx, bz)) % 4


@dataclass(frozen=True)
class MeasurementRecord:
    step: int
    measured: PauliOperator
    outcome: int
    corrected: bool
    deterministic: bool = False

    def format(self) -> str:
        sign = "+1" if self.outcome == 1 else "-1"
        return f"step={self.step} op={format_pauli(self.measured)} outcome={sign} corrected={str(self.corrected).lower()}"


class StabilizerState:
    """Stabilizer + destabilizer tableau with an explicitly seeded RNG."""

    def __init__(self, n: int, seed: int | None = 0, rng: random.Random | None = None):
        self.n = n
        self.sx = [0] * n
        self.sz = [1 << q for q in range(n)]
        self.sp = [0] * n
        self.dx = [1 << q for q in range(n)]
        self.dz = [0] * n
        self.dp = [0] * n
        self.seed = seed
        self.rng = rng if rng is not None else random.Random(seed)

    # -- construction ------------------------------------------------------
    def copy(self, rng: random.Random | None = None) -> "StabilizerState":
        new = object.__new__(StabilizerState)
        new.n = self.n
        new.sx, new.sz, new.sp = self.sx[:], self.sz[:], self.sp[:]
        new.dx, new.dz, new.dp = self.dx[:], self.dz[:], self.dp[:]
        new.seed = self.seed
        if rng is None:
            rng = random.Random()
            rng.setstate(self.rng.getstate())
        new.rng = rng
        return new

    @classmethod
    def from_stabilizers(cls, stabs: Sequence[PauliOperator], seed: int | None = 0) -> "StabilizerState":
        """State with the given complete, commuting, independent stabilizer list."""
        n = stabs[0].n if stabs else 0
        if len(stabs) != n:
            raise SimulationError(f"need {n} stabilizers, got {len(stabs)}")
        st = cls(n, seed)
        st.sx = [p.x for p in stabs]
        st.sz = [p.z for p in stabs]
        st.sp = [p.phase for p in stabs]
        # destabilizers: D_i anticommutes with S_i only and the D's commute
        dest: list[tuple[int, int]] = []
        for i in range(n):
            cons = list(stabs) + [PauliOperator(n, x, z) for x, z in dest]
            rhs = [1 if j == i else 0 for j in range(n)] + [0] * len(dest)
            a = np.zeros((len(cons), 2 * n), dtype=np.uint8)
            for r, c in enumerate(cons):
                a[r, :n] = c.zbits()
                a[r, n:] = c.xbits()
            sol, _ = solve_gf2(a, np.array(rhs, dtype=np.uint8))
            if sol is None:
                raise SimulationError("stabilizers are dependent or do not commute")
            dest.append((sum(int(sol[q]) << q for q in range(n)), sum(int(sol[n + q]) << q for q in range(n))))
        st.dx = [x for x, _ in dest]
        st.dz = [z for _, z in dest]
        st.dp = [0] * n
        st.check_invariants()
        return st

    # -- views -------------------------------------------------------------
    def stabilizers(self) -> list[PauliOperator]:
        return [PauliOperator(self.n, x, z, p) for x, z, p in zip(self.sx, self.sz, self.sp)]

    def destabilizers(self) -> list[PauliOperator]:
        return [PauliOperator(self.n, x, z, p) for x, z, p in zip(self.dx, self.dz, self.dp)]

    def canonical(self) -> tuple:
        """Sign-exact reduced echelon form of the stabilizer group."""
        return group_fingerprint(self.stabilizers())

    def check_invariants(self) -> None:
        n = self.n
        for i in range(n):
            if self.sp[i] % 2 or self.dp[i] % 2:
                raise SimulationError("non-Hermitian tableau row")
            for j in range(n):
                s_d = symplectic(self.sx[i], self.sz[i], self.dx[j], self.dz[j])
                if s_d != (i == j):
                    raise SimulationError(f"destabilizer pairing broken at ({i}, {j})")
                if j > i:
                    if symplectic(self.sx[i], self.sz[i], self.sx[j], self.sz[j]):
                        raise SimulationError("stabilizer rows anticommute")
                    if symplectic(self.dx[i], self.dz[i], self.dx[j], self.dz[j]):
                        raise SimulationError("destabilizer rows anticommute")

    # -- gates -----------------------------------------------------------------
    def _rows(self):
        return ((self.sx, self.sz, self.sp), (self.dx, self.dz, self.dp))

    def h(self, q: int) -> None:
        b = 1 << q
        for xs, zs, ps in self._rows():
            for i in range(self.n):
                x, z = xs[i] & b, zs[i] & b
                if x and z:
                    ps[i] = (ps[i] + 2) % 4
                if bool(x) != bool(z):
                    xs[i] ^= b
                    zs[i] ^= b

    def s(self, q: int) -> None:
        b = 1 << q
        for xs, zs, ps in self._rows():
            for i in range(self.n):
                if xs[i] & b:
                    if zs[i] & b:
                        ps[i] = (ps[i] + 2) % 4
                    zs[i] ^= b

    def sdg(self, q: int) -> None:
        for _ in range(3):
            self.s(q)

    def cnot(self, c: int, t: int) -> None:
        if c == t:
            raise SimulationError("control equals target")
        bc, bt = 1 << c, 1 << t
        for xs, zs, ps in self._rows():
            for i in range(self.n):
                xc, zc = bool(xs[i] & bc), bool(zs[i] & bc)
                xt, zt = bool(xs[i] & bt), bool(zs[i] & bt)
                if xc and zt and (xt == zc):
                    ps[i] = (ps[i] + 2) % 4
                if xc:
                    xs[i] ^= bt
                if zt:
                    zs[i] ^= bc

    def cz(self, c: int, t: int) -> None:
        self.h(t)
        self.cnot(c, t)
        self.h(t)

    def controlled_pauli(self, control: int, target: int, letter: str) -> None:
        if letter == "X":
            self.cnot(control, target)
        elif letter == "Z":
            self.cz(control, target)
        elif letter == "Y":
            self.sdg(target)
            self.cnot(control, target)
            self.s(target)
        else:
            raise SimulationError(f"bad Pauli letter {letter!r}")

    def apply_pauli(self, p: PauliOperator) -> None:
        """Pauli frame update: rows anticommuting with ``p`` flip sign."""
        self._check(p)
        for xs, zs, ps in self._rows():
            for i in range(self.n):
                if symplectic(xs[i], zs[i], p.x, p.z):
                    ps[i] = (ps[i] + 2) % 4

    # -- measurement -------------------------------------------------------------
    def _check(self, p: PauliOperator) -> None:
        if p.n != self.n:
            raise SimulationError(f"operator acts on {p.n} qubits, state has {self.n}")

    def _group_element(self, p: PauliOperator) -> tuple[int, int, int]:
        """Product of the stabilizer rows that reproduces ``p`` up to sign."""
        n = self.n
        acc = (0, 0, 0)
        for i in range(n):
            if symplectic(self.dx[i], self.dz[i], p.x, p.z):
                acc = _mul(n, *acc, self.sx[i], self.sz[i], self.sp[i])
        return acc

    def expectation(self, p: PauliOperator) -> int:
        """+1 / -1 when ``p`` or ``-p`` stabilizes the state, else 0."""
        self._check(p)
        if not p.is_hermitian:
            raise SimulationError("non-Hermitian observable")
        for i in range(self.n):
            if symplectic(self.sx[i], self.sz[i], p.x, p.z):
                return 0
        x, z, ph = self._group_element(p)
        if (x, z) != (p.x, p.z):
            raise SimulationError("internal error: commuting operator outside the stabilizer group")
        return 1 if ph == p.phase else -1

    def is_deterministic(self, p: PauliOperator) -> bool:
        return all(not symplectic(self.sx[i], self.sz[i], p.x, p.z) for i in range(self.n))

    def measure(self, p: PauliOperator, forced: int | None = None) -> int:
        """Projective measurement of Hermitian ``p``; returns +1 or -1.

        ``forced`` fixes the outcome of a random measurement (used for branch
        enumeration); forcing an impossible deterministic outcome raises.
        """
        self._check(p)
        if not p.is_hermitian:
            raise SimulationError("cannot measure a non-Hermitian operator")
        n = self.n
        anti = [i for i in range(n) if symplectic(self.sx[i], self.sz[i], p.x, p.z)]
        if not anti:
            out = self.expectation(p)
            if forced is not None and forced != out:
                raise SimulationError(f"outcome {forced:+d} is impossible; measurement is deterministic")
            return out
        k = anti[0]
        kx, kz, kp = self.sx[k], self.sz[k], self.sp[k]
        for i in anti[1:]:
            self.sx[i], self.sz[i], self.sp[i] = _mul(n, self.sx[i], self.sz[i], self.sp[i], kx, kz, kp)
        for i in range(n):
            if i != k and symplectic(self.dx[i], self.dz[i], p.x, p.z):
                self.dx[i], self.dz[i], self.dp[i] = _mul(n, self.dx[i], self.dz[i], self.dp[i], kx, kz, kp)
        out = forced if forced is not None else (1 if self.rng.random() < 0.5 else -1)
        if out not in (1, -1):
            raise SimulationError("forced outcome must be +1 or -1")
        self.dx[k], self.dz[k], self.dp[k] = kx, kz, kp
        self.sx[k], self.sz[k] = p.x, p.z
        self.sp[k] = p.phase if out == 1 else (p.phase + 2) % 4
        return out

    def flip_operator(self, p: PauliOperator, keep: Sequence[PauliOperator]) -> PauliOperator:
        """A Pauli anticommuting with ``p`` and commuting with ``keep``."""
        n = self.n
        cons = list(keep) + [p]
        a = np.zeros((len(cons), 2 * n), dtype=np.uint8)
        for r, c in enumerate(cons):
            a[r, :n] = c.zbits()
            a[r, n:] = c.xbits()
        sol, _ = solve_gf2(a, np.array([0] * len(keep) + [1], dtype=np.uint8))
        if sol is None:
            raise SimulationError(f"cannot flip {format_pauli(p)} without disturbing fixed operators")
        return PauliOperator(n, sum(int(sol[q]) << q for q in range(n)), sum(int(sol[n + q]) << q for q in range(n)))

    # -- ancilla handling ---------------------------------------------------------
    def with_ancillas(self, m: int) -> "StabilizerState":
        """Append ``m`` qubits in |0>."""
        n2 = self.n + m
        new = StabilizerState(n2, self.seed, self.rng)
        new.sx = self.sx[:] + [0] * m
        new.sz = self.sz[:] + [1 << q for q in range(self.n, n2)]
        new.sp = self.sp[:] + [0] * m
        new.dx = self.dx[:] + [1 << q for q in range(self.n, n2)]
        new.dz = self.dz[:] + [0] * m
        new.dp = self.dp[:] + [0] * m
        return new

    def discard_qubits(self, keep: int) -> "StabilizerState":
        """Trace out qubits ``keep..n-1``; they must be unentangled with the rest."""
        n = self.n
        rows = self.stabilizers()
        high = ((1 << n) - 1) ^ ((1 << keep) - 1)
        used = [False] * n
        for q in range(keep, n):
            for part in ("x", "z"):
                piv = next((i for i, r in enumerate(rows) if not used[i] and getattr(r, part) >> q & 1), None)
                if piv is None:
                    continue
                used[piv] = True
                for i, r in enumerate(rows):
                    if i != piv and getattr(r, part) >> q & 1:
                        rows[i] = multiply(r, rows[piv])
        data = [r for i, r in enumerate(rows) if not used[i]]
        if len(data) != keep or any((r.x | r.z) & high for r in data):
            raise SimulationError("discarded qubits are entangled with the data")
        low = (1 << keep) - 1
        return StabilizerState.from_stabilizers([PauliOperator(keep, r.x & low, r.z & low, r.phase) for r in data],
                                                self.seed)


# -- preparation ---------------------------------------------------------------------

def prepare_codespace(code: StabilizerCode, logical_fixings: Sequence[PauliOperator] | None = None,
                      seed: int | None = 0) -> StabilizerState:
    """|0...0> projected onto the codespace (and the fixed logical eigenspaces).

    Each operator is measured in turn; a -1 outcome is undone by a Pauli that
    anticommutes with it and commutes with everything fixed so far.
    """
    st = StabilizerState(code.n, seed)
    fixed: list[PauliOperator] = []
    for p in list(code.generators) + list(logical_fixings or ()):
        if p.n != code.n:
            raise CodeError("fixing acts on the wrong number of qubits")
        for f in fixed:
            if anticommutes(p, f):
                raise SimulationError(f"contradictory fixings: {format_pauli(p)} anticommutes with {format_pauli(f)}")
        if PauliSpan(code.n, fixed).contains_vector(p.vector()) and fixed:
            raise SimulationError(f"{format_pauli(p)} is already determined by earlier fixings")
        if st.measure(p) == -1:
            st.apply_pauli(st.flip_operator(p, fixed))
        fixed.append(p)
    return st


def random_stabilizer_state(n: int, rng: random.Random, depth: int | None = None) -> StabilizerState:
    """Random Clifford circuit applied to |0...0>."""
    st = StabilizerState(n, rng=rng)
    for _ in range(depth if depth is not None else 6 * n + 4):
        kind = rng.randrange(3) if n > 1 else rng.randrange(2)
        if kind == 0:
            st.h(rng.randrange(n))
        elif kind == 1:
            st.s(rng.randrange(n))
        else:
            c, t = rng.sample(range(n), 2)
            st.cnot(c, t)
    return st


# -- rewiring execution --------------------------------------------------------------

def transport_logical(sigma: PauliOperator, g_old: PauliOperator, g_new: PauliOperator) -> PauliOperator:
    """Conjugation by U = (1 + g_new g_old)/sqrt(2): sigma -> sigma g_old g_new if it
    anticommutes with g_old g_new, else unchanged."""
    gg = multiply(g_old, g_new)
    if symplectic(sigma.x, sigma.z, gg.x, gg.z):
        return multiply(multiply(sigma, g_old), g_new)
    return sigma


def apply_rewire_step(state: StabilizerState, step: MeasurementStep, index: int = 0,
                      pre_code: StabilizerCode | None = None, forced: int | None = None) -> MeasurementRecord:
    if pre_code is not None:
        for i, g in enumerate(pre_code.generators):
            if state.expectation(g) != 1:
                raise SimulationError(f"step {index}: generator {i} ({format_pauli(g)}) is not at +1")
    det = state.is_deterministic(step.measure)
    out = state.measure(step.measure, forced)
    if out == -1:
        state.apply_pauli(step.correction)
    return MeasurementRecord(index, step.measure, out, out == -1, det)


@dataclass
class ExecutionResult:
    state: StabilizerState
    records: list[MeasurementRecord]
    logicals: list[PauliOperator]


def execute_plan(state: StabilizerState, plan: RewirePlan, logicals: Sequence[PauliOperator] = (),
                 forced: Sequence[int | None] | None = None, check: bool = True,
                 index_offset: int = 0) -> ExecutionResult:
    """Run every step, transport ``logicals`` and verify the final codespace."""
    records = []
    transported = list(logicals)
    for i, step in enumerate(plan.steps):
        pre = plan.intermediate_codes[i] if check else None
        f = forced[i] if forced is not None and i < len(forced) else None
        records.append(apply_rewire_step(state, step, i + index_offset, pre, f))
        transported = [transport_logical(s, step.correction, step.measure) for s in transported]
    if plan.frame is not None:
        state.apply_pauli(plan.frame)
        transported = [s.negated() if anticommutes(s, plan.frame) else s for s in transported]
    if check:
        target = plan.intermediate_codes[-1]
        for i, g in enumerate(target.generators):
            if state.expectation(g) != 1:
                raise SimulationError(f"final generator {i} ({format_pauli(g)}) is not at +1")
    return ExecutionResult(state, records, transported)


def format_transcript(records: Iterable[MeasurementRecord], seed: int | None, plan: RewirePlan | None = None) -> str:
    head = f"seed={seed}"
    if plan is not None:
        head += f" from={plan.source.label or 'source'} to={plan.target.label or 'target'} steps={len(plan.steps)}"
    return "\n".join([head] + [r.format() for r in records]) + "\n"


# -- branch enumeration -------------------------------------------------------------------

@dataclass
class BranchSummary:
    branches: int  # total outcome branches covered
    distinct_final_states: int
    final_state: tuple
    random_steps: int
    logical_eigenvalues: list[int]


def enumerate_branches(state: StabilizerState, plans: RewirePlan | Sequence[RewirePlan],
                       logicals: Sequence[PauliOperator] = (), max_steps: int = 64) -> BranchSummary:
    """Exhaustive over all measurement outcomes of one plan or a chain of plans.

    Branches reaching the same canonical state after a step have identical
    futures, so they are merged (with multiplicities); deterministic steps
    do not branch.
    """
    if isinstance(plans, RewirePlan):
        plans = [plans]
    events = []  # (step, pre-step code) or a frame Pauli
    for plan in plans:
        events += [(s, plan.intermediate_codes[i]) for i, s in enumerate(plan.steps)]
        if plan.frame is not None:
            events.append(plan.frame)
    nsteps = sum(len(p.steps) for p in plans)
    if nsteps > max_steps:
        raise SimulationError(f"{nsteps} steps; branch enumeration limited to {max_steps}")
    layer = {state.canonical(): (state, 1)}
    logs = list(logicals)
    random_steps = 0
    index = 0
    for ev in events:
        if isinstance(ev, PauliOperator):
            for st, _ in layer.values():
                st.apply_pauli(ev)
            layer = {st.canonical(): (st, m) for st, m in layer.values()}
            logs = [s.negated() if anticommutes(s, ev) else s for s in logs]
            continue
        step, pre = ev
        nxt: dict[tuple, tuple] = {}
        branched = False
        for st, mult in layer.values():
            outcomes = (None,) if st.is_deterministic(step.measure) else (1, -1)
            branched |= len(outcomes) == 2
            for o in outcomes:
                s2 = st.copy()
                apply_rewire_step(s2, step, index, pre, o)
                key = s2.canonical()
                if key in nxt:
                    nxt[key] = (nxt[key][0], nxt[key][1] + mult)
                else:
                    nxt[key] = (s2, mult)
        logs = [transport_logical(s, step.correction, step.measure) for s in logs]
        random_steps += branched
        index += 1
        layer = nxt
    finals = list(layer.values())
    final = finals[0][0]
    return BranchSummary(sum(m for _, m in finals), len(finals), final.canonical(), random_steps,
                         [final.expectation(s) for s in logs])


# -- logical action -------------------------------------------------------------------------

def logical_list(code: StabilizerCode) -> list[PauliOperator]:
    """Logicals ordered X1..Xk, Z1..Zk (computed when the code has none)."""
    pairs = code.logicals if code.logicals is not None else compute_logicals(code)
    return [a for a, _ in pairs] + [b for _, b in pairs]


@dataclass(frozen=True)
class LogicalAction:
    symplectic: np.ndarray  # row i: image of input logical i in (X1..Xk, Z1..Zk) coordinates
    signs: tuple[int, ...]  # 1 when the image carries a minus sign

    @property
    def k(self) -> int:
        return self.symplectic.shape[0] // 2

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.symplectic, np.eye(2 * self.k, dtype=np.uint8))) and not any(self.signs)

    def preserves_symplectic_form(self) -> bool:
        k = self.k
        omega = np.zeros((2 * k, 2 * k), dtype=np.uint8)
        omega[:k, k:] = np.eye(k, dtype=np.uint8)
        omega[k:, :k] = np.eye(k, dtype=np.uint8)
        m = self.symplectic.astype(np.int64)
        return bool(np.array_equal((m @ omega @ m.T) % 2, omega))

    def format(self) -> str:
        rows = [" ".join(str(int(v)) for v in row) + ("  -" if s else "  +")
                for row, s in zip(self.symplectic, self.signs)]
        return "\n".join(rows)


def _hermitian_product(ops: Sequence[PauliOperator], n: int) -> PauliOperator:
    p = product(ops, n)
    return p if p.is_hermitian else p.hermitian()


def extract_logical_action(before: StabilizerCode, after: StabilizerCode,
                           transported: Sequence[PauliOperator]) -> LogicalAction:
    """Coordinates of each transported logical in the after-code's logical basis.

    The image of input logical ``i`` is written as ``s * L * S`` with ``L``
    the Hermitian product of after-code logicals (X's before Z's, ascending
    index), ``S`` a product of after-code generators and ``s`` the recorded
    sign.
    """
    if len(transported) != 2 * before.k or before.k != after.k:
        raise SimulationError("transported logicals do not match the codes' logical counts")
    return action_in_basis(after, logical_list(after), transported)


def action_in_basis(code: StabilizerCode, basis: Sequence[PauliOperator],
                    transported: Sequence[PauliOperator]) -> LogicalAction:
    """Like :func:`extract_logical_action` for an explicit (possibly partial)
    logical basis ordered X1..Xm, Z1..Zm; every image must lie in the span of
    ``basis`` and the code's generators."""
    if len(basis) != len(transported) or len(basis) % 2:
        raise SimulationError("need an even-sized basis matching the transported list")
    m = len(basis)
    gens = list(code.generators)
    r = len(gens)
    mat = np.zeros((m, m), dtype=np.uint8)
    signs = []
    for i, t in enumerate(transported):
        res = in_span(t, gens + list(basis))
        if not res.member:
            raise SimulationError(f"transported logical {format_pauli(t)} left the logical space")
        combo = sorted(res.combination)
        log_idx = [j - r for j in combo if j >= r]
        stab_idx = [j for j in combo if j < r]
        for j in log_idx:
            mat[i, j] = 1
        lpart = _hermitian_product([basis[j] for j in log_idx], code.n)
        rebuilt = multiply(lpart, product([gens[j] for j in stab_idx], code.n))
        if (rebuilt.x, rebuilt.z) != (t.x, t.z):
            raise SimulationError("internal error: logical decomposition mismatch")
        rel = (t.phase - rebuilt.phase) % 4
        if rel % 2:
            raise SimulationError("internal error: non-Hermitian logical image")
        signs.append(1 if rel == 2 else 0)
    return LogicalAction(mat, tuple(signs))


# -- cat-state measurement -------------------------------------------------------------------

@dataclass
class CatMeasurement:
    outcome: int
    state: StabilizerState
    ancilla_outcomes: list[int]
    transcript: list[str] = field(default_factory=list)


def cat_state_measure(state: StabilizerState, p: PauliOperator, rng: random.Random | None = None,
                      inject_x_on: int | None = None,
                      forced_ancillas: Sequence[int] | None = None) -> CatMeasurement:
    """Measure ``p`` through an m-qubit cat state, one ancilla per support qubit.

    ``inject_x_on`` places an X error on that ancilla (0-based within the
    ancilla register) after cat preparation, before its controlled gate.
    The data state is left unchanged; the post-measurement data state is
    returned.
    """
    state._check(p)
    if not p.is_hermitian:
        raise SimulationError("cannot measure a non-Hermitian operator")
    support = p.support
    m = len(support)
    if m == 0:
        raise SimulationError("cannot cat-measure the identity")
    n = state.n
    work = state.copy(rng).with_ancillas(m)
    if rng is not None:
        work.rng = rng
    anc = list(range(n, n + m))
    transcript = [f"cat m={m} ancillas={n + 1}..{n + m}"]
    work.h(anc[0])
    for a in anc[1:]:
        work.cnot(anc[0], a)
    if inject_x_on is not None:
        if not 0 <= inject_x_on < m:
            raise SimulationError("injected error outside the ancilla register")
        work.apply_pauli(PauliOperator.single(n + m, anc[inject_x_on], "X"))
        transcript.append(f"inject X on ancilla {inject_x_on + 1}")
    for a, q in zip(anc, support):
        work.controlled_pauli(a, q, p.letter(q))
    for a in anc:
        work.h(a)
    outs = []
    for t, a in enumerate(anc):
        f = forced_ancillas[t] if forced_ancillas is not None else None
        o = work.measure(PauliOperator.single(n + m, a, "Z"), f)
        outs.append(o)
        transcript.append(f"ancilla={t + 1} outcome={'+1' if o == 1 else '-1'}")
    parity = 1
    for o in outs:
        parity *= o
    outcome = parity * (-1 if p.phase == 2 else 1)
    transcript.append(f"parity={'even' if parity == 1 else 'odd'} outcome={'+1' if outcome == 1 else '-1'}")
    data = work.discard_qubits(n)
    data.rng = state.rng
    return CatMeasurement(outcome, data, outs, transcript)


def error_weight_between(a: StabilizerState, b: StabilizerState, max_weight: int = 1) -> int | None:
    """Smallest weight (<= max_weight) of a Pauli E with E a = b, else None."""
    from itertools import combinations, product as iproduct
    if a.canonical() == b.canonical():
        return 0
    n = a.n
    target = b.canonical()
    for w in range(1, max_weight + 1):
        for support in combinations(range(n), w):
            for letters in iproduct("XYZ", repeat=w):
                e = PauliOperator.identity(n)
                for q, l in zip(support, letters):
                    e = multiply(e, PauliOperator.single(n, q, l))
                c = a.copy()
                c.apply_pauli(e)
                if c.canonical() == target:
                    return w
    return None


# -- unitary properties ---------------------------------------------------------------------------

@dataclass
class UnitaryReport:
    ok: bool
    checked: int
    problems: list[str]
    dense_checked: bool


def _all_paulis(n: int):
    for x in range(1 << n):
        for z in range(1 << n):
            yield PauliOperator(n, x, z)


def verify_unitary_properties(g: PauliOperator, gp: PauliOperator, samples: Sequence[PauliOperator] | None = None,
                              dense: bool | None = None) -> UnitaryReport:
    """Check the conjugation rule of U = (1 + g' g)/sqrt(2).

    Symplectic checks: U g U^dag = g', the rule is a homomorphism that
    preserves commutation on the checked operators.  With ``dense`` (default
    for n <= 3) the rule is compared to explicit matrices, including U U^dag = 1.
    """
    if g.n != gp.n:
        raise SimulationError("length mismatch")
    if not anticommutes(g, gp):
        raise SimulationError("U is only defined for anticommuting g, g'")
    n = g.n
    problems: list[str] = []
    ops = list(samples) if samples is not None else (
        list(_all_paulis(n)) if n <= 3 else
        [PauliOperator.single(n, q, l) for q in range(n) for l in "XZ"])
    if transport_logical(g, g, gp) != gp:
        problems.append("U g U^dag != g'")
    images = [transport_logical(s, g, gp) for s in ops]
    for s, im in zip(ops, images):
        gg = multiply(g, gp)
        if not symplectic(s.x, s.z, gg.x, gg.z) and im != s:
            problems.append(f"commuting operator {format_pauli(s)} moved")
    for i in range(len(ops)):
        for j in range(i + 1, len(ops)):
            a, b = ops[i], ops[j]
            if symplectic(a.x, a.z, b.x, b.z) != symplectic(images[i].x, images[i].z, images[j].x, images[j].z):
                problems.append(f"commutation of {format_pauli(a)}, {format_pauli(b)} not preserved")
            prod = multiply(a, b)
            if prod.is_hermitian:
                lhs = transport_logical(prod, g, gp)
                rhs = multiply(images[i], images[j])
                if lhs != rhs:
                    problems.append(f"rule is not multiplicative on {format_pauli(a)}, {format_pauli(b)}")
    use_dense = dense if dense is not None else n <= 3
    if use_dense:
        from .dense import conjugate, rewire_unitary, pauli_matrix
        u = rewire_unitary(g, gp)
        if not np.allclose(u @ u.conj().T, np.eye(1 << n), atol=1e-10):
            problems.append("U U^dag != 1")
        for s, im in zip(ops, images):
            if not np.allclose(conjugate(u, s), pauli_matrix(im), atol=1e-10):
                problems.append(f"dense conjugation of {format_pauli(s)} disagrees")
    return UnitaryReport(not problems, len(ops), problems, use_dense)
