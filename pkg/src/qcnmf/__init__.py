"""Convex non-negative matrix factorization through QUBO subproblems."""

from .baseline import BaselineConfig, solve_classical
from .builders import BuilderConfig, BuildMode, build_g_qubo, build_w_qubo, subproblem_bit_count
from .chimera import ChimeraSpec, max_direct_reals, physical_qubits_for_clique, qubit_curve
from .driver import FactorizationConfig, FactorizationResult, assign_clusters, init_w, run
from .encoding import BitLayout, EncodingScheme, decode_matrix, decode_value, quantize
from .linalg import frobenius_sq, gram, matmul, objective, penalty_g, penalty_w
from .qubo import QuboModel
from .solvers import SaSchedule, SolveResult, default_schedule, solve_exhaustive, solve_sa

__version__ = "0.1.0"
