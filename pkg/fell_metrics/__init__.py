"""
fell_metrics: вычислимые метрики на пространствах непрерывных функций
с открытыми областями определения и на гиперпространстве замкнутых множеств.
"""
from .basis import (
    AmbientSpace,
    CompactSet,
    Interval,
    IntervalSet,
    OpenSet,
    basis_element,
    closed_interval,
    compact_exhaustion,
    enumerate_rational,
    normalize_open,
    open_interval,
)
from .convergence import (
    CauchyReport,
    SequenceSpec,
    Verdict,
    beta_decay_report,
    counterexample_gamma,
    gamma_cauchy_check,
    inverse_limit_check,
    limit_candidate,
)
from .enclosure import Enclosure, TruncationPlan
from .errors import FellMetricsError
from .hyperspace import ClosedSet, complement_of_domain, complement_of_image, d_fell, fell_hit, fell_miss
from .metric import beta, beta_mn, d_gamma, sup_distance
from .partial_map import GammaMap, PartialMap, compose, evaluate, identity_on, image, invert, join, preimage
