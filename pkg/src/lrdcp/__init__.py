"""Rank-based, self-normalized change-point tests for long-range dependent series."""
from ._backend import NAME as BACKEND
from .cp_stats import StatTrajectory, cusum_trajectory, rank_cusum_trajectory, rank_edf, ranks
from .errors import (
    DivergenceError,
    DomainError,
    EmbeddingError,
    IngestionError,
    LrdcpError,
    NumericalError,
    UnsupportedInputError,
)
from .gaussian_core import (
    HermiteSpec,
    hermite_coefficient,
    hermite_poly,
    normal_cdf,
    normal_quantile,
    scaling_dnr,
)
from .lrd_sim import (
    MarginalSpec,
    ShiftSpec,
    TimeSeries,
    fgn_acvf,
    inject_shift,
    simulate_fgn,
    subordinate,
)
from .scores import HBarIntegral, ScoreSpec, check_score_assumption, make_scores
from .self_norm import SNTrajectory, segment_partial_sums, sn_cusum_stat, sn_rank_stat, sn_trajectory

__version__ = "0.1.0"
