"""Exact verification of quadratic-ratio bounds and the exclusion case pipelines."""

from .cases import (CaseResult, Comparison, exclude_L0, exclude_low_mult_point, exclude_mu3_extension,
                    exclude_mu4, exclude_mu_ge_5, exclude_smooth_center, exclude_Y_equals_R,
                    lemma3_case, lower_claim, core_claim)
from .claimfile import format_claim, parse_claim
from .cone import ConeRegion
from .forms import LinearForm, QuadForm, SOSIdentity
from .ledger import LedgerConfig, ledger_status, run_claim_ledger
from .ratio import (Certificate, DenominatorError, QuadraticRatioClaim, RatioMinimum, ratio_minimum,
                    verify_ratio_bound)
from .systems import InequalitySystem, chain_system, mu4_system

__all__ = [
    "CaseResult", "Certificate", "Comparison", "ConeRegion", "DenominatorError", "InequalitySystem",
    "LedgerConfig", "LinearForm", "QuadForm", "QuadraticRatioClaim", "RatioMinimum", "SOSIdentity",
    "chain_system", "exclude_L0", "exclude_Y_equals_R", "exclude_low_mult_point",
    "exclude_mu3_extension", "exclude_mu4", "exclude_mu_ge_5", "exclude_smooth_center",
    "format_claim", "ledger_status", "lemma3_case", "lower_claim", "mu4_system", "parse_claim",
    "core_claim", "ratio_minimum", "run_claim_ledger", "verify_ratio_bound",
]
