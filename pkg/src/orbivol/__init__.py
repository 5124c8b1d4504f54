"""Complex volumes of hyperbolic alternating knot orbifolds."""
from .complexfn import li2, mod_reduce, principal_log, rogers_r
from .cvolume import OrbifoldInvariants, complex_volume, load_table1, table1_row
from .diagram import KnotDiagram, SideType, classify_sides, emit, generate_j_diagram, parse_pd
from .jknot import (JKnotParams, assemble_solution, build_sequences, geometric_lambda,
                    holonomy_matrices, lambda_from_solution, rep_residual, rm_equivalence_residual,
                    rm_polynomial)
from .potential import build_potential, eval_grad, eval_v
from .solver import SolverConfig, solve_complete, solve_orbifold

__version__ = "0.1.0"
