"""Exact-arithmetic engine for generalized preprojective algebras:
module theory, geometric crystal operators, Littlewood-Richardson
coefficients and semicanonical functions, verifiable at desk scale."""

from .cartan import (CartanDatum, bil_euler, bil_sym, expected_dim,
                     kostant_count, minimal_symmetrizer, nu_from_weight,
                     positive_roots, q_dc, validate_datum, weyl_dim)
from .catalog import (a2d2_fixtures, b2_fixtures, direct_sum,
                      from_labeled_basis, g2_fixtures, make_E, make_S,
                      make_serre_witness, sample_locally_free)
from .convolution import (ConvBudget, ConvExpr, efactor, eval_expr,
                          euler_eval, flag_count_fq, modfactor, rho_eval,
                          semicanonical_construct, serre_element)
from .crystal import (CrystalGraph, CrystalNode, b_lambda_star, b_mu,
                      compare_kostant, emit_dot, emit_json, generate_binfty,
                      lr_decompose, reconstruct_from_key, string_key,
                      verify_axioms, weight_multiplicities)
from .fields import DEFAULT_PRIME, GFp, QQ
from .genericops import (GenericityPolicy, e_plain, e_star, eps_star_val,
                         eps_val, ext_formula_check, f_plain, f_star)
from .modrep import (Rep, check_relations, ext1_dim_direct, ext1_dim_lf,
                     ext1_to_E, hom_basis, hom_dim, is_crystal,
                     is_e_filtered, is_indecomposable, is_locally_free,
                     jordan_type, orbit_dim, phi, phi_star, rank_vector,
                     transpose_dual)
from .presentation import (DoubledQuiver, PathExpr, build_quiver,
                           h_relations, preprojective_relations)

__version__ = "0.1.0"
