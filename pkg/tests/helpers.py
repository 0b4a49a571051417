"""Random objects shared by the property tests."""

import random

from hypothesis import strategies as st

from stabrewire.codes import StabilizerCode
from stabrewire.pauli import PauliOperator, multiply
from stabrewire.tableau import random_stabilizer_state


def random_pauli(rng: random.Random, n: int, signed: bool = True) -> PauliOperator:
    p = PauliOperator(n, rng.getrandbits(n), rng.getrandbits(n))
    return p.negated() if signed and rng.random() < 0.5 else p


def random_code(rng: random.Random, n: int, k: int, label: str = "") -> StabilizerCode:
    """Valid [[n, k]] code: rows of a random stabilizer state, mixed and re-signed."""
    rows = random_stabilizer_state(n, rng).stabilizers()
    for _ in range(2 * n):
        if n > 1:
            i, j = rng.sample(range(n), 2)
            rows[i] = multiply(rows[i], rows[j])
    rows = [r.negated() if rng.random() < 0.5 else r for r in rows]
    return StabilizerCode(n, k, tuple(rows[: n - k]), None, label)


def random_anticommuting_pair(rng: random.Random, n: int) -> tuple[PauliOperator, PauliOperator]:
    while True:
        a, b = random_pauli(rng, n), random_pauli(rng, n)
        if (a.x | a.z) and (b.x | b.z) and not _commute(a, b):
            return a, b


def _commute(a, b):
    return (((a.x & b.z) ^ (a.z & b.x)).bit_count() & 1) == 0


@st.composite
def paulis(draw, n=None, max_n=8, signed=True):
    if n is None:
        n = draw(st.integers(1, max_n))
    x = draw(st.integers(0, (1 << n) - 1))
    z = draw(st.integers(0, (1 << n) - 1))
    phase = draw(st.sampled_from([0, 2])) if signed else 0
    return PauliOperator(n, x, z, phase)


@st.composite
def pauli_pairs(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    return draw(paulis(n=n)), draw(paulis(n=n))


@st.composite
def code_pairs(draw, max_n=8):
    """Two random valid codes with equal n and k."""
    n = draw(st.integers(2, max_n))
    k = draw(st.integers(1, n - 1))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = random.Random(seed)
    return random_code(rng, n, k, "s"), random_code(rng, n, k, "t")


@st.composite
def codes(draw, max_n=8, min_k=0):
    n = draw(st.integers(max(1, min_k), max_n))
    k = draw(st.integers(min_k, n))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_code(random.Random(seed), n, k)
