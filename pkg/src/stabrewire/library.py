"""Builders for the code fixtures used throughout the package.

Generator lists are written with 1-based sparse labels so they can be read
against the usual tables by eye.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .codes import CodeError, StabilizerCode, pad_with_ancillas, permute_qubits, require_valid, save_code
from .pauli import PauliOperator, parse_pauli

STEANE = [
    "X1 X3 X5 X7",
    "X2 X3 X6 X7",
    "X4 X5 X6 X7",
    "Z1 Z3 Z5 Z7",
    "Z2 Z3 Z6 Z7",
    "Z4 Z5 Z6 Z7",
]

REED_MULLER = [
    "X1 X3 X5 X7 X9 X11 X13 X15",
    "X2 X3 X6 X7 X10 X11 X14 X15",
    "X4 X5 X6 X7 X12 X13 X14 X15",
    "X8 X9 X10 X11 X12 X13 X14 X15",
    "Z1 Z3 Z5 Z7 Z9 Z11 Z13 Z15",
    "Z2 Z3 Z6 Z7 Z10 Z11 Z14 Z15",
    "Z4 Z5 Z6 Z7 Z12 Z13 Z14 Z15",
    "Z8 Z9 Z10 Z11 Z12 Z13 Z14 Z15",
    "Z1 Z3 Z9 Z11",
    "Z2 Z3 Z10 Z11",
    "Z3 Z7 Z11 Z15",
    "Z1 Z3 Z5 Z7",
    "Z2 Z3 Z6 Z7",
    "Z4 Z5 Z6 Z7",
]

APPD_MID = [
    "Z1 Z4 Z5 Z7",
    "X1 X2 X5 X6",
    "X1 X3 X4 X6",
    "Z1 Z3 Z5 Z7",
    "Z1 Z2 Z5 Z6",
    "Z1 Z3 Z4 Z6",
]


def _code(gens, n, label) -> StabilizerCode:
    return StabilizerCode.from_strings(gens, n=n, label=label)


def build_steane() -> StabilizerCode:
    return _code(STEANE, 7, "steane")


def build_padded_steane() -> StabilizerCode:
    """Steane code on qubits 1-7 plus Z8 ... Z15."""
    return pad_with_ancillas(build_steane(), 8).relabel("steane15")


def build_reed_muller() -> StabilizerCode:
    return _code(REED_MULLER, 15, "reed_muller15")


def worked_example_fixtures() -> dict[str, StabilizerCode]:
    steane = build_steane()
    swapped = permute_qubits(steane, [1, 2, 4, 3, 5, 6, 7])
    return {
        "appc_2q_a": _code(["Z1"], 2, "appc_2q_a"),
        "appc_2q_b": _code(["Z2"], 2, "appc_2q_b"),
        "appc_3q_a": _code(["Z1 Z2", "Z3"], 3, "appc_3q_a"),
        "appc_3q_b": _code(["Z1", "X2 X3"], 3, "appc_3q_b"),
        "appd_a": steane.relabel("appd_a"),
        "appd_mid": _code(APPD_MID, 7, "appd_mid"),
        "appd_b": swapped.relabel("appd_b"),
    }


# -- surface-code patches ---------------------------------------------------

@dataclass(frozen=True)
class SurfaceLayout:
    """Planar checkerboard patch with qubits on the vertices.

    ``rows x cols`` square plaquettes; plaquette ``(r, c)`` has corners
    ``(r, c), (r, c+1), (r+1, c), (r+1, c+1)`` and is Z-type (yellow) when
    ``r + c`` is even, X-type (red) otherwise.  Vertices are numbered
    row-major from the top-left corner.  ``defects`` lists removed plaquettes.
    ``twist`` optionally replaces plaquettes by explicit operators, given as
    ``{(r, c): "sparse pauli text"}`` with 1-based vertex labels.
    """

    rows: int
    cols: int
    defects: tuple[tuple[int, int], ...] = ()
    twist: dict = field(default_factory=dict, hash=False, compare=False)

    @property
    def n(self) -> int:
        return (self.rows + 1) * (self.cols + 1)

    def vertex(self, r: int, c: int) -> int:
        return r * (self.cols + 1) + c

    def color(self, r: int, c: int) -> str:
        return "Z" if (r + c) % 2 == 0 else "X"

    def corners(self, r: int, c: int) -> tuple[int, ...]:
        return tuple(sorted(self.vertex(r + dr, c + dc) for dr in (0, 1) for dc in (0, 1)))

    def plaquettes(self) -> list[tuple[int, int]]:
        return [(r, c) for r in range(self.rows) for c in range(self.cols)]


def plaquette_operator(layout: SurfaceLayout, r: int, c: int) -> PauliOperator:
    n = layout.n
    mask = sum(1 << q for q in layout.corners(r, c))
    if layout.color(r, c) == "Z":
        return PauliOperator(n, 0, mask)
    return PauliOperator(n, mask, 0)


def build_surface_code(layout: SurfaceLayout, label: str = "") -> StabilizerCode:
    removed = list(layout.defects)
    if len(set(removed)) != len(removed):
        raise CodeError("overlapping defects")
    for r, c in removed + list(layout.twist):
        if not (0 <= r < layout.rows and 0 <= c < layout.cols):
            raise CodeError(f"plaquette {(r, c)} outside a {layout.rows}x{layout.cols} patch")
    if set(removed) & set(layout.twist):
        raise CodeError("a plaquette cannot be both removed and twisted")
    gens = []
    for r, c in layout.plaquettes():
        if (r, c) in removed:
            continue
        if (r, c) in layout.twist:
            gens.append(parse_pauli(layout.twist[(r, c)], layout.n))
        else:
            gens.append(plaquette_operator(layout, r, c))
    code = StabilizerCode(layout.n, layout.n - len(gens), tuple(gens), None, label)
    require_valid(code)
    return code


def _fig1_permutation(layout: SurfaceLayout, p: tuple[int, int], q: tuple[int, int]) -> list[int]:
    """Relabel vertices so plaquette ``p`` is 1,2,3,4 and ``q`` is 4,5,6,7."""
    a, b = layout.corners(*p), layout.corners(*q)
    shared = sorted(set(a) & set(b))
    if len(shared) != 1:
        raise CodeError("fig1 plaquettes must share exactly one vertex")
    s = shared[0]
    order = [v for v in a if v != s] + [s] + [v for v in b if v != s]
    rest = [v for v in range(layout.n) if v not in order]
    perm = [0] * layout.n
    for new, old in enumerate(order + rest):
        perm[old] = new + 1
    return perm


FIG1_ROWS, FIG1_COLS = 4, 4
FIG1_P, FIG1_Q = (1, 1), (2, 2)  # diagonal Z-plaquettes sharing one vertex


def fig1_pair() -> tuple[StabilizerCode, StabilizerCode]:
    """e-defect moved diagonally: the left code keeps g0 = Z1Z2Z3Z4, the
    right code keeps g0' = Z4Z5Z6Z7."""
    base = SurfaceLayout(FIG1_ROWS, FIG1_COLS)
    perm = _fig1_permutation(base, FIG1_P, FIG1_Q)
    left = build_surface_code(SurfaceLayout(FIG1_ROWS, FIG1_COLS, (FIG1_Q,)))
    right = build_surface_code(SurfaceLayout(FIG1_ROWS, FIG1_COLS, (FIG1_P,)))
    return (
        permute_qubits(left, perm).relabel("fig1_left"),
        permute_qubits(right, perm).relabel("fig1_right"),
    )


FIG2_ROWS, FIG2_COLS = 4, 4
FIG2_E, FIG2_M = (2, 2), (2, 1)  # adjacent Z- and X-plaquettes


def fig2_pair() -> tuple[StabilizerCode, StabilizerCode]:
    """e-defect at a Z plaquette converted to an m-defect on its X neighbour."""
    left = build_surface_code(SurfaceLayout(FIG2_ROWS, FIG2_COLS, (FIG2_E,)), "fig2_left")
    right = build_surface_code(SurfaceLayout(FIG2_ROWS, FIG2_COLS, (FIG2_M,)), "fig2_right")
    return left, right


FIG3_LEFT = ["Z1 Z2 X4 X5", "X2 X3 Z5 Y6 X7"]
FIG3_RIGHT = ["-Z1 Z2 X4 Y5 Z6", "X2 X3 X6 X7"]


def fig3_pair() -> tuple[StabilizerCode, StabilizerCode]:
    """Twist shortening, restricted to the two generators that change."""
    return _code(FIG3_LEFT, 7, "fig3_left"), _code(FIG3_RIGHT, 7, "fig3_right")


BRAID_ROWS, BRAID_COLS = 4, 4
BRAID_M = (2, 1)  # X plaquette hosting the m-defect
BRAID_LOOP = ((1, 1), (2, 2), (3, 1), (2, 0), (1, 1))  # e-defect positions, diagonal moves around BRAID_M


def braid_loop_codes() -> list[StabilizerCode]:
    """Codes visited while an e-defect circles the m-defect and returns."""
    return [build_surface_code(SurfaceLayout(BRAID_ROWS, BRAID_COLS, (e, BRAID_M)), f"braid{i}")
            for i, e in enumerate(BRAID_LOOP)]


def all_fixtures() -> dict[str, StabilizerCode]:
    out = {
        "steane": build_steane(),
        "steane15": build_padded_steane(),
        "reed_muller15": build_reed_muller(),
    }
    out.update(worked_example_fixtures())
    out["fig1_left"], out["fig1_right"] = fig1_pair()
    out["fig3_left"], out["fig3_right"] = fig3_pair()
    return out


def export_fixtures(directory: str | Path) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, code in all_fixtures().items():
        path = directory / f"{name}.code"
        save_code(code, path)
        paths.append(path)
    return paths
