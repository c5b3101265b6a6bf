"""Domain-wall partition functions of spin-k/2 vertex models.

Weights of the higher-spin models are synthesized by fusing blocks of
six-vertex weights; partition functions come either from exhaustive
enumeration (the oracle) or from determinant formulas, and a verification
layer cross-checks the two together with the symmetry, recursion, degree
and homogeneous-limit properties.
"""

from .bracket import BracketParams, Jet, bracket, bracket_falling, bracket_jet, \
    is_singular_bracket, phi, phi_derivatives, phi_jet
from .determinant import IKMatrix, PFResult, det_complex, fused_pf, \
    homogeneous_pf, ik_matrix, ik_pf, semi_homogeneous_pf, spin1_pf
from .enumeration import ExtendedASM, LatticeConfig, asm_of_config, \
    brute_force_pf, config_of_asm, count_configs, enumerate_asms, \
    enumerate_configs
from .errors import BudgetExceeded, DegenerateRapidities, DWError, \
    GenericityExhausted, NotInTable, SingularArgument, SingularNormalization, \
    UnreachableSigma
from .model import BoundarySigma, VertexSpins, VertexWeightTable, c_plus_weight, \
    conserving_vertices, fuse_block, fuse_block_with_outflow, q_multiplicity, \
    sigma_representative, sigma_set, six_vertex_weight, spin1_closed_form, \
    spin1_table_weight, spin_values, stack_rapidities, weight_table
from .verify import CheckReport, CheckSpec, run_degree_check, run_equivalence, \
    run_homogeneous_suite, run_recursion_suite
__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
