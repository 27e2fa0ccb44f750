"""Logarithmic tail asymptotics of perpetuities R = q + M R with M in [0, 1].

Mixing-law catalog, theorem constants and predictions, Legendre-Fenchel
upper-bound machinery, constructive lower-bound certificates and a
reproducible Monte Carlo simulator with a compiled kernel.
"""

__version__ = "0.1.0"

from .asymptotics import (PredictedLogTail, TailPrediction, predict_log_tail, tail_prediction,
                          theorem_constant)
from .bounds import (CaseI, CaseII, PathCertificate, Sandwich, atom_bounds, hitczenko_sandwich,
                     path_certificate)
from .errors import CertificateError, ConfigError, DomainError, QuadratureError
from .legendre import (ConjugateResult, chernoff_log_tail_bound, conjugate, evaluate_I_psi,
                       scaled_conjugate)
from .regvar import TailClass, gamma_aux_check, argument_ratio_limit, potter_verify, rv_index_estimate
from .simulate import (TailEstimate, draw_perpetuity, estimate_tail, exact_small_n_oracle,
                       wilson_interval)
from .tail_models import (AtomAtOne, GammaExp, LogPower, MixingLaw, PowerUniform, RapidNonGamma,
                          WeibullAtOne, f_derivative, f_value, law_from_json, ln_tail_at, sample)

__all__ = [
    "AtomAtOne", "CaseI", "CaseII", "CertificateError", "ConfigError", "ConjugateResult",
    "DomainError", "GammaExp", "LogPower", "MixingLaw", "PathCertificate", "PowerUniform",
    "PredictedLogTail", "QuadratureError", "RapidNonGamma", "Sandwich", "TailClass",
    "TailEstimate", "TailPrediction", "WeibullAtOne", "atom_bounds", "chernoff_log_tail_bound",
    "conjugate", "draw_perpetuity", "estimate_tail", "evaluate_I_psi", "exact_small_n_oracle",
    "f_derivative", "f_value", "gamma_aux_check", "hitczenko_sandwich", "law_from_json",
    "argument_ratio_limit", "ln_tail_at", "path_certificate", "potter_verify", "predict_log_tail",
    "rv_index_estimate", "sample", "scaled_conjugate", "tail_prediction", "theorem_constant",
    "wilson_interval",
]
