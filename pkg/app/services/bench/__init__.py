"""
Package `app.services.bench`

Experiment orchestration (comparison, convergence, spectrum) and result
persistence.
"""

from .experiment_workflow import (
    choose_k,
    load_ground_truth,
    prepare_baseline,
    realtime_sinogram,
    resolve_assembly,
    run_comparison,
    run_convergence,
    run_spectrum,
    run_trial,
    view_angles,
)
from .results import (
    aggregate_trials,
    convergence_points,
    load_trial_results,
    median_map_fractions,
    save_comparison,
    save_convergence,
    save_spectrum,
    write_trial_results,
)

__all__ = [
    "choose_k",
    "aggregate_trials",
    "convergence_points",
    "load_ground_truth",
    "load_trial_results",
    "median_map_fractions",
    "prepare_baseline",
    "realtime_sinogram",
    "resolve_assembly",
    "run_comparison",
    "run_convergence",
    "run_spectrum",
    "run_trial",
    "save_comparison",
    "save_convergence",
    "save_spectrum",
    "view_angles",
    "write_trial_results",
]
