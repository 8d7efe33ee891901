"""Numerical verification of Bohnenblust-Hille type inequalities."""
from .constants import DEFAULT_CONSTANTS, BHConstantTable, chain_constant
from .report import HOLDS, INCONCLUSIVE, VIOLATED, InequalityReport, fitted_constant, judge
from .trials import CHECKS, TrialSummary, all_ids, certified_polynomial, certified_tensor, get_check, run_trials
from .verifiers import (
    diagonal_apply,
    greedy_partition,
    is_partition,
    khinchine_mc,
    verify_bf,
    verify_bps_blocks,
    verify_cor2,
    verify_destimate,
    verify_diagonal,
    verify_embedding_lorentz_blocks,
    verify_fournier,
    verify_lem1,
    verify_lem2,
    verify_lemma_x,
    verify_lorentz_blocks,
    verify_main1,
    verify_main2,
    verify_mixed_bh,
    verify_polarization,
    verify_poly_bh,
    verify_polycase,
    verify_symmetric_blocks,
    verify_uno,
)
