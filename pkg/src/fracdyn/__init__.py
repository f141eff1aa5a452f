"""Random-time-changed dynamical systems driven by inverse subordinators.

Kernel catalogs with their Bernstein triples, the density of the inverse
clock and its transforms, subordination of deterministic flows, generalized
convolution derivatives, long-time decay laws, potentials and Green
measures, average trajectories, and a Monte Carlo oracle that cross-checks
everything pathwise.
"""

__version__ = "0.1.0"

from .density import (
    GEvaluator,
    clock_moment2,
    density_rule,
    double_laplace_check,
    g_eval,
    g_eval_grid,
    laplace_tau,
    mean_clock,
    moment,
)
from .errors import (
    ConvergenceError,
    DivergenceError,
    InversionError,
    NumericsError,
    ParameterError,
    QuadratureError,
)
from .flows import (
    Flow,
    Observable,
    constant_observable,
    coordinate_observable,
    expabs_observable,
    exppow_observable,
    flow_from_field,
    flow_start,
    linear_flow,
    liouville_residual,
    liouville_u,
    parse_flow_config,
    parse_obs_config,
    power_flow,
)
from .kernels import (
    BernsteinTriple,
    HypothesisReport,
    KernelSpec,
    consistency_report,
    hypothesis_H_check,
    k_eval,
    kernel_config_string,
    make_triple,
    parse_kernel_config,
    small_jump_mean,
    small_jump_second_moment,
)
from .laplace import TransformFn, laplace_forward, laplace_invert, talbot_nodes
from .mc import (
    EmpiricalDensity,
    MCExpectation,
    PathSample,
    default_jump_cutoff,
    empirical_density,
    empirical_expectation,
    first_passage_inverse,
    laplace_match,
    passage_times,
    sample_path_general,
    sample_stable_increment,
    truncation_bias,
)
from .potentials import (
    DivergenceReport,
    GreenMeasure,
    RenormalizedPotential,
    green_integral,
    green_measure,
    naive_V_divergence_check,
    potential_U,
    renormalized_Vr,
)
from .special import (
    g_profile,
    incomplete_gamma_upper,
    mittag_leffler,
    one_sided_stable_density,
    stable_inverse_density_closed,
)
from .subordination import (
    AsymptoticProfile,
    SubordinatedSolution,
    asymptotic_profile,
    decay_ratio,
    evolution_residual,
    gfd_apply,
    predicted_decay,
    profile_probe,
    subordinate,
    subordinate_grid,
)
from .trajectory import TrajectoryReport, mean_trajectory
