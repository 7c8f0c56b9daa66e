"""Exceptional polynomials over finite fields: classification via the
difference-quotient criterion, smooth plane models, point counts, zeta
data, and an exhaustive coprimality scan."""

from .bifactor import AbsIrredVerdict, BiFactorization, ScreenResult, \
    bi_factor, is_abs_irreducible, point_count_screen
from .counting import CountRow, CountTable, GrowthReport, GrowthRow, \
    WeilCheck, WeilVerification, ZetaData, count_points, defect_sequence, \
    growth_report, predict_counts, verify_weil, zeta_from_counts
from .curves import CurveSearchTrace, PlaneCurve, SingularWitness, \
    SmoothCertificate, TernaryForm, construct_paper_curve, \
    jacobian_smooth_check, paper_form, points_at_infinity
from .errors import CapError, CarlitzLabError, InconsistentCountsError, \
    ParseError
from .exceptional import ExceptionalityReport, FactorEvidence, \
    PipelineReport, ScanResult, carlitz_wan_scan, is_exceptional_cohen, \
    is_permutation, monomial_oracle, normalize, run_paper_pipeline
from .fields import Embedding, FieldCtx, FieldElem, embed, extension_of, \
    gf_construct
from .polys import BiPoly, UniPoly, bi_divmod_exact, bi_gcd, diff_quotient, \
    pth_power_test, sylvester_resultant_y
from .textforms import parse_bi, parse_field_spec, parse_ternary, \
    parse_uni, render_bi, render_uni
from .unifactor import count_roots, roots, squarefree_decomposition, \
    uni_factor

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
