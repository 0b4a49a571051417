import random
from functools import reduce

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_anticommuting_pair, random_code, random_pauli
from stabrewire import dense
from stabrewire.codes import StabilizerCode
from stabrewire.library import worked_example_fixtures, build_steane
from stabrewire.pauli import PauliOperator, anticommutes, multiply, parse_pauli
from stabrewire.planner import RewirePlan, plan_rewire
from stabrewire.tableau import (SimulationError, StabilizerState, action_in_basis, apply_rewire_step,
                                cat_state_measure, enumerate_branches, error_weight_between, execute_plan,
                                extract_logical_action, format_transcript, logical_list, prepare_codespace,
                                random_stabilizer_state, transport_logical, verify_unitary_properties)

H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
S = np.diag([1, 1j])
I2 = np.eye(2)


def one_qubit(u, q, n):
    return reduce(np.kron, [u if i == q else I2 for i in range(n)])


def cnot_matrix(c, t, n):
    dim = 1 << n
    m = np.zeros((dim, dim))
    for b in range(dim):
        bits = [(b >> (n - 1 - i)) & 1 for i in range(n)]
        if bits[c]:
            bits[t] ^= 1
        m[sum(v << (n - 1 - i) for i, v in enumerate(bits)), b] = 1
    return m


def vec(state):
    return dense.state_vector(state.stabilizers())


# -- gates against dense matrices ------------------------------------------------------

@settings(max_examples=40)
@given(st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_random_circuit_matches_dense(n, seed):
    rng = random.Random(seed)
    tab = StabilizerState(n)
    psi = np.zeros(1 << n, dtype=complex)
    psi[0] = 1
    for _ in range(12):
        kind = rng.randrange(4 if n > 1 else 3)
        q = rng.randrange(n)
        if kind == 0:
            tab.h(q)
            psi = one_qubit(H, q, n) @ psi
        elif kind == 1:
            tab.s(q)
            psi = one_qubit(S, q, n) @ psi
        elif kind == 2:
            tab.sdg(q)
            psi = one_qubit(S.conj(), q, n) @ psi
        else:
            c, t = rng.sample(range(n), 2)
            tab.cnot(c, t)
            psi = cnot_matrix(c, t, n) @ psi
        tab.check_invariants()
    assert dense.equal_up_to_phase(vec(tab), psi)


@pytest.mark.parametrize("letter", "XYZ")
def test_controlled_pauli_matches_dense(letter):
    rng = random.Random(7)
    for _ in range(5):
        tab = random_stabilizer_state(2, rng)
        psi = vec(tab)
        tab.controlled_pauli(0, 1, letter)
        ctrl = np.kron(np.diag([1, 0]), I2) + np.kron(np.diag([0, 1]), dense.letter_matrix(letter))
        assert dense.equal_up_to_phase(vec(tab), ctrl @ psi)


# -- measurement -------------------------------------------------------------------------

@settings(max_examples=40)
@given(st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_measurement_matches_projection(n, seed):
    rng = random.Random(seed)
    tab = random_stabilizer_state(n, rng)
    p = random_pauli(rng, n)
    if p.weight == 0:
        return
    psi = vec(tab)
    proj = {o: (np.eye(1 << n) + o * dense.pauli_matrix(p)) / 2 for o in (1, -1)}
    probs = {o: np.linalg.norm(proj[o] @ psi) ** 2 for o in (1, -1)}
    out = tab.measure(p)
    assert probs[out] > 1e-9
    assert dense.equal_up_to_phase(vec(tab), proj[out] @ psi)
    deterministic = min(probs.values()) < 1e-9
    assert deterministic == (abs(probs[1] - 0.5) > 1e-9)
    tab.check_invariants()


def test_measure_stabilizer_is_deterministic_and_unchanged():
    tab = prepare_codespace(build_steane())
    before = tab.canonical()
    assert tab.measure(parse_pauli("X1 X3 X5 X7", 7)) == 1
    assert tab.canonical() == before


def test_repeated_measurement_deterministic():
    tab = StabilizerState(2, seed=3)
    out = tab.measure(parse_pauli("XX"))
    assert tab.is_deterministic(parse_pauli("XX"))
    assert tab.measure(parse_pauli("XX")) == out


def test_forced_outcomes():
    tab = StabilizerState(1)
    assert tab.copy().measure(parse_pauli("X"), forced=-1) == -1
    with pytest.raises(SimulationError):
        tab.measure(parse_pauli("Z"), forced=-1)


def test_non_hermitian_measurement_rejected():
    tab = StabilizerState(1)
    with pytest.raises(SimulationError):
        tab.measure(PauliOperator._raw(1, 1, 1, 1))


def test_measurement_outcomes_are_seeded():
    outs = []
    for _ in range(2):
        tab = StabilizerState(3, seed=42)
        outs.append([tab.measure(parse_pauli(p)) for p in ["XII", "IXI", "IIX", "YYZ"]])
    assert outs[0] == outs[1]


# -- Pauli frame --------------------------------------------------------------------------

def test_apply_pauli_flips_exactly_anticommuting_rows():
    rng = random.Random(5)
    tab = random_stabilizer_state(4, rng)
    p = random_pauli(rng, 4)
    rows = tab.stabilizers()
    tab.apply_pauli(p)
    for old, new in zip(rows, tab.stabilizers()):
        assert (old.x, old.z) == (new.x, new.z)
        assert (old.phase != new.phase) == anticommutes(old, p)
    tab.apply_pauli(p)
    assert tab.stabilizers() == rows


def test_apply_stabilizer_changes_nothing():
    tab = prepare_codespace(build_steane())
    before = tab.canonical()
    tab.apply_pauli(parse_pauli("Z1 Z3 Z5 Z7", 7))
    assert tab.canonical() == before


# -- preparation -----------------------------------------------------------------------------

def test_prepare_empty_code_with_fixed_z():
    tab = prepare_codespace(StabilizerCode(1, 1, ()), [parse_pauli("Z")])
    assert dense.equal_up_to_phase(vec(tab), np.array([1, 0]))


def test_prepare_steane_with_logical():
    c = build_steane()
    zbar = logical_list(c)[1]
    for seed in range(4):
        tab = prepare_codespace(c, [zbar], seed=seed)
        assert all(tab.expectation(g) == 1 for g in c.generators)
        assert tab.expectation(zbar) == 1
    assert prepare_codespace(c, [zbar], seed=1).canonical() == prepare_codespace(c, [zbar], seed=2).canonical()


def test_prepare_signed_generators():
    c = StabilizerCode.from_strings(["-ZZ", "-XX"])
    tab = prepare_codespace(c, seed=9)
    assert tab.expectation(parse_pauli("-ZZ")) == 1 and tab.expectation(parse_pauli("-XX")) == 1


def test_prepare_contradictory_fixings():
    c = build_steane()
    xbar, zbar = logical_list(c)
    with pytest.raises(SimulationError):
        prepare_codespace(c, [xbar, zbar])
    with pytest.raises(SimulationError):
        prepare_codespace(c, [c.generators[0]])


def test_from_stabilizers_and_discard():
    tab = StabilizerState.from_stabilizers([parse_pauli("XX"), parse_pauli("ZZ")])
    tab.check_invariants()
    big = tab.with_ancillas(2)
    big.h(2)
    assert big.discard_qubits(2).canonical() == tab.canonical()
    big.cnot(0, 3)
    with pytest.raises(SimulationError):
        big.discard_qubits(2)


# -- rewiring steps and plans ------------------------------------------------------------------

def test_rewire_step_precondition_checked():
    fx = worked_example_fixtures()
    plan = plan_rewire(fx["appc_2q_a"], fx["appc_2q_b"])
    tab = StabilizerState.from_stabilizers([parse_pauli("-ZI"), parse_pauli("IZ")])
    with pytest.raises(SimulationError):
        apply_rewire_step(tab, plan.steps[0], 0, plan.intermediate_codes[0])


def test_rewire_step_outcome_independent():
    fx = worked_example_fixtures()
    plan = plan_rewire(fx["appc_2q_a"], fx["appc_2q_b"])
    base = prepare_codespace(fx["appc_2q_a"], [parse_pauli("ZZ")])
    finals = set()
    for o in (1, -1):
        tab = base.copy()
        rec = apply_rewire_step(tab, plan.steps[0], 0, plan.intermediate_codes[0], o)
        assert rec.corrected == (o == -1)
        finals.add(tab.canonical())
    assert len(finals) == 1


def test_rewire_step_already_stabilized():
    tab = prepare_codespace(StabilizerCode.from_strings(["XX"]))
    from stabrewire.planner import MeasurementStep
    rec = apply_rewire_step(tab, MeasurementStep(parse_pauli("XX"), parse_pauli("ZI")))
    assert rec.outcome == 1 and not rec.corrected and rec.deterministic


def test_empty_plan_is_identity():
    c = build_steane()
    plan = RewirePlan((), (c,))
    logs = logical_list(c)
    res = execute_plan(prepare_codespace(c), plan, logs)
    assert res.records == [] and res.logicals == logs
    assert extract_logical_action(c, c, res.logicals).is_identity()


def test_three_qubit_example_all_branches_preserve_logical():
    fx = worked_example_fixtures()
    s, t = fx["appc_3q_a"], fx["appc_3q_b"]
    plan = plan_rewire(s, t)
    zbar = logical_list(s)[1]
    summ = enumerate_branches(prepare_codespace(s, [zbar]), plan, [zbar])
    assert summ.branches == 8 and summ.distinct_final_states == 1
    assert summ.logical_eigenvalues == [1]
    # the same with explicit forcing of every outcome pattern
    finals = set()
    for bits in range(8):
        tab = prepare_codespace(s, [zbar])
        forced = [1 - 2 * (bits >> i & 1) for i in range(3)]
        res = execute_plan(tab, plan, [zbar], forced=forced)
        assert res.state.expectation(res.logicals[0]) == 1
        finals.add(res.state.canonical())
    assert len(finals) == 1


def test_transcript_format():
    fx = worked_example_fixtures()
    plan = plan_rewire(fx["appc_2q_a"], fx["appc_2q_b"])
    res = execute_plan(prepare_codespace(fx["appc_2q_a"], seed=4), plan)
    text = format_transcript(res.records, 4, plan)
    lines = text.splitlines()
    assert lines[0].startswith("seed=4")
    assert lines[1].startswith("step=0 op=XX outcome=")
    for rec, line in zip(res.records, lines[1:]):
        assert line.endswith("corrected=" + ("true" if rec.outcome == -1 else "false"))


# -- logical action ---------------------------------------------------------------------------

def dense_plan_unitary(plans):
    u = None
    for plan in plans:
        for step in plan.steps:
            m = dense.rewire_unitary(step.correction, step.measure)
            u = m if u is None else m @ u
    return u


def test_two_qubit_cycle_logical_action_matches_dense_oracle():
    fx = worked_example_fixtures()
    a, b = fx["appc_2q_a"], fx["appc_2q_b"]
    p1, p2 = plan_rewire(a, b), plan_rewire(b, a)
    logs = logical_list(a)
    transported = execute_plan(prepare_codespace(a), p1, logs).logicals
    transported = [transport_logical_chain(t, p2) for t in transported]
    action = extract_logical_action(a, a, transported)
    # dense oracle: U L U^dag restricted to the codespace equals the image read off the action
    u = dense_plan_unitary([p1, p2])
    proj = (np.eye(4) + dense.pauli_matrix(a.generators[0])) / 2
    for i, lin in enumerate(logs):
        lhs = u @ dense.pauli_matrix(lin) @ u.conj().T @ proj
        row = [logs[j] for j in range(2) if action.symplectic[i, j]]
        img = row[0] if len(row) == 1 else multiply(row[0], row[1]).hermitian()
        sign = -1 if action.signs[i] else 1
        assert np.allclose(lhs, sign * dense.pauli_matrix(img) @ proj, atol=1e-10)
    # frozen value (fixed by the dense check above): this cycle acts trivially
    assert action.symplectic.tolist() == [[1, 0], [0, 1]]
    assert action.signs == (0, 0)
    assert action.preserves_symplectic_form()


def transport_logical_chain(op, plan):
    for s in plan.steps:
        op = transport_logical(op, s.correction, s.measure)
    return op


def test_action_in_partial_basis():
    c = StabilizerCode.from_strings(["ZZI"])
    basis = [parse_pauli("XXI"), parse_pauli("IIX"), parse_pauli("ZII"), parse_pauli("IIZ")]
    action = action_in_basis(c, basis, [parse_pauli("XXX"), parse_pauli("IIX"), parse_pauli("ZII"),
                                        parse_pauli("-ZIZ")])
    assert action.symplectic.tolist() == [[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 1, 1]]
    assert action.signs == (0, 0, 0, 1)


def test_logical_leaving_space_detected():
    c = build_steane()
    with pytest.raises(SimulationError):
        extract_logical_action(c, c, [parse_pauli("X1", 7), parse_pauli("Z1", 7)])


# -- cat-state measurement -------------------------------------------------------------------------

def test_cat_single_qubit_matches_direct():
    rng = random.Random(3)
    for _ in range(10):
        tab = random_stabilizer_state(2, rng)
        cat = cat_state_measure(tab, parse_pauli("ZI"), random.Random(rng.random()))
        direct = tab.copy()
        direct.measure(parse_pauli("ZI"), cat.outcome)
        assert cat.state.canonical() == direct.canonical()
        assert len(cat.ancilla_outcomes) == 1


def test_cat_signed_operator():
    tab = StabilizerState(1)
    assert cat_state_measure(tab, parse_pauli("-Z"), random.Random(0)).outcome == -1


def test_cat_leaves_input_untouched():
    tab = random_stabilizer_state(3, random.Random(1))
    before = tab.canonical()
    cat_state_measure(tab, parse_pauli("XYZ"), random.Random(0))
    assert tab.canonical() == before


def test_cat_weight_zero_rejected():
    with pytest.raises(SimulationError):
        cat_state_measure(StabilizerState(2), parse_pauli("II"))


def test_cat_outcomes_balanced_on_fresh_state():
    c = build_steane()
    g0 = c.generators[0]
    counts = {1: 0, -1: 0}
    rng = random.Random(11)
    for _ in range(200):
        # |0...0> is a fresh state that is not an eigenstate of g0
        cat = cat_state_measure(StabilizerState(7), g0, random.Random(rng.random()))
        counts[cat.outcome] += 1
    assert 60 < counts[1] < 140


def test_injected_error_spreads_to_one_qubit():
    tab = random_stabilizer_state(7, random.Random(2))
    g0 = build_steane().generators[0]
    clean = cat_state_measure(tab, g0, random.Random(5))
    for j in range(4):
        bad = cat_state_measure(tab, g0, random.Random(5), inject_x_on=j, forced_ancillas=clean.ancilla_outcomes)
        assert bad.outcome == clean.outcome
        assert error_weight_between(bad.state, clean.state, 2) in (0, 1)
    with pytest.raises(SimulationError):
        cat_state_measure(tab, g0, inject_x_on=4)


# -- unitary properties -------------------------------------------------------------------------------

def test_unitary_single_qubit():
    rep = verify_unitary_properties(parse_pauli("Z"), parse_pauli("X"))
    assert rep.ok and rep.dense_checked
    assert transport_logical(parse_pauli("Z"), parse_pauli("Z"), parse_pauli("X")) == parse_pauli("X")


def test_unitary_commuting_inputs_rejected():
    with pytest.raises(SimulationError):
        verify_unitary_properties(parse_pauli("ZZ"), parse_pauli("XX"))


def test_transport_leaves_commuting_operator():
    g, gp = parse_pauli("ZI"), parse_pauli("XI")
    assert transport_logical(parse_pauli("IZ"), g, gp) == parse_pauli("IZ")


@settings(max_examples=30)
@given(st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_unitary_random_dense(n, seed):
    g, gp = random_anticommuting_pair(random.Random(seed), n)
    rep = verify_unitary_properties(g, gp)
    assert rep.ok, rep.problems
