"""Measurement-based rewiring between stabilizer codes."""

from .codes import (CodeError, StabilizerCode, SubsystemCode, compute_logicals, load_code, pad_with_ancillas,
                    parse_code, format_code, save_code, validate)
from .metrics import DistanceReport, code_distance, enumerate_subsystem_codes, path_distance_profile
from .pauli import PauliError, PauliOperator, anticommutes, commutes, format_pauli, multiply, parse_pauli
from .planner import (BlockDecomposition, ConstraintSet, MeasurementStep, RewirePlan, build_plan, check_plan,
                      connectivity_matrix, constrained_path_search, decompose_blocks, load_plan, plan_rewire,
                      save_plan)
from .tableau import (LogicalAction, MeasurementRecord, SimulationError, StabilizerState, cat_state_measure,
                      execute_plan, extract_logical_action, prepare_codespace)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
