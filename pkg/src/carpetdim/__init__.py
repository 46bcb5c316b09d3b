"""Dimension theory toolkit for self-affine carpets."""

from .counting import (
    ApproxSquare,
    approx_square_count,
    assouad_estimate,
    assouad_table,
    covering_count,
    gap_pairs,
    level_split,
    lg_approx_squares,
    minkowski_estimate,
    verify_counting_lemma,
)
from .dims import (
    bm_assouad,
    bm_conformal_assouad,
    bm_hausdorff,
    bm_minkowski,
    dimension_report,
    lg_assouad,
    lg_conformal_assouad,
)
from .disconnect import classify_uniform_disconnection, escape_test
from .errors import BudgetExceeded, CarpetError
from .model import BMCarpet, LGCarpet, bm_row_stats, embed_bm_as_lg, validate_bm, validate_lg
from .moran import lg_beta_x, lg_beta_y, lg_minkowski_delta, moran_root
from .render import RenderConfig, render
from .specfile import dump_spec, load_spec, parse_spec, tangent_document
from .tangent import lg_tangent, tangent_carpet, tangent_digits, verify_tangent_convergence

__all__ = [
    "ApproxSquare", "BMCarpet", "BudgetExceeded", "CarpetError", "LGCarpet", "RenderConfig",
    "approx_square_count", "assouad_estimate", "assouad_table", "bm_assouad", "bm_conformal_assouad",
    "bm_hausdorff", "bm_minkowski", "bm_row_stats", "classify_uniform_disconnection", "covering_count",
    "dimension_report", "dump_spec", "embed_bm_as_lg", "escape_test", "gap_pairs", "level_split",
    "lg_approx_squares", "lg_assouad", "lg_beta_x", "lg_beta_y", "lg_conformal_assouad",
    "lg_minkowski_delta", "lg_tangent", "load_spec", "minkowski_estimate", "moran_root", "parse_spec",
    "render", "tangent_carpet", "tangent_digits", "tangent_document", "validate_bm", "validate_lg",
    "verify_counting_lemma", "verify_tangent_convergence",
]
