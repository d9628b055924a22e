"""Multiobjective NK landscapes with tunable objective correlation.

Generate rho-MNK instances, enumerate their Pareto local optima and Pareto
optimal sets, and probe multimodality with Pareto adaptive walks.
"""

from .correlated import CopulaSampler, CorrelationMatrix, adjust_for_copula, build_sampler, validate_rho
from .dominance import (
    Comparison, compare, dominates, dominating_neighbors, neighbors, nondominated_filter, nondominated_mask,
)
from .enumeration import PloSummary, enumerate_pareto_set, enumerate_plo, is_pareto_local_optimum
from .errors import (
    FormatError, InvalidK, LengthMismatch, NonPositiveData, NotPositiveSemidefinite, RhoOutOfRange,
    RMNKError, SpaceTooLarge, VersionError, ZeroVariance,
)
from .experiments import (
    GridConfig, GridRow, RegressionFit, cell_means, empirical_objective_correlation, fit_linear, fit_linlog,
    fit_loglog, mean_off_diagonal, pearson, read_rows, run_grid, spearman, write_rows,
)
from .landscape import (
    Instance, dumps_instance, evaluate, evaluate_ints, evaluate_many, from_int, from_string, generate_instance,
    random_solution, read_instance, to_int, to_string, write_instance,
)
from .walker import WalkRecord, WalkStats, estimate_log_plo, estimate_plo, phc_walk, walk_campaign, walk_lengths

__version__ = "0.1.0"
