"""Belief evolution under confirmation bias on weighted influence graphs."""

from .analysis import (
    ConvergenceReport,
    PersistenceDiagnosis,
    StructureReport,
    convergence_report,
    degroot_iterate,
    degroot_matrix,
    diagnose_persistence,
    group_flow_conservation,
    is_balanced,
    is_reciprocal,
    is_regular,
    is_strongly_connected,
    is_weakly_connected,
    predict_consensus,
    structure_report,
)
from .core import (
    BeliefConfig,
    Discretization,
    ExperimentConfig,
    InfluenceGraph,
    Trace,
    ValidationError,
    neighbors,
    validate,
)
from .dynamics import UpdateRule, cb_factor, evolve, is_radical, step, step_cb, step_classical
from .polarization import BinDistribution, bin_index, esteban_ray, polarization, to_distribution

__version__ = "0.1.0"
