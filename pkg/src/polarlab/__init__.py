"""polarlab: opinion dynamics on social graphs with group-based
polarization metrics, spectral equilibrium predictions, and a scenario
harness for reproducible experiments."""

__version__ = "0.1.0"

from .graphs import (  # noqa: F401
    Graph,
    StructureReport,
    generate_sbm,
    generate_geometric,
    load_edge_list,
    validate,
    largest_component,
)
from .dynamics import (  # noqa: F401
    StandardNormalInit,
    UniformInit,
    ExplicitInit,
    Trajectory,
    degroot_step,
    run_degroot,
    consensus_value,
    fj_step,
)
from .metrics import (  # noqa: F401
    MetricSeries,
    ProfileMatrix,
    variance,
    sign_of_deviation,
    bimodality,
    local_agreement,
    profile_matrix,
    profile_histogram,
    alignment_reached,
    evaluate_group_metric,
)
from .spectral import (  # noqa: F401
    SpectralSummary,
    top_eigenpairs,
    sign_normalize,
    equilibrium_direction,
    normalized_deviation,
)
from .equilibrium import (  # noqa: F401
    EquilibriumReport,
    equilibrium_metric,
    local_agreement_spectral_approx,
    regular_quadratic_form,
    gaussian_sample_bimodality,
    sbm_bimodality_curve,
)
from .stats import ensemble_stats, pearson  # noqa: F401
from .harness import (  # noqa: F401
    ExperimentConfig,
    ConvergenceCriterion,
    iterations_to_convergence,
    run_scenario,
    fig6_scatter,
    parse_graph_spec,
)
