"""Opinion dynamics under authority and confirmation bias.

Simulation of synchronous belief updates over weighted influence graphs,
Esteban-Ray polarization of the resulting belief configurations, and
analysis/checking of their convergence behaviour.
"""
from .analysis import (
    ConvergenceBound,
    ExtremeSeries,
    LimitReport,
    SccDecomposition,
    UpdateMatrix,
    build_update_matrix,
    clique_convergence_bound,
    extremes,
    limit_beliefs,
    predict_consensus,
    scc_condense,
)
from .errors import (
    BeliefPolarError,
    InvalidPathError,
    InvalidSizeError,
    NotAPathError,
    ParameterError,
    PreconditionError,
    ShapeError,
)
from .graphs import GraphClassReport, GraphKind, InfluencePath, classify, gen_influence, product_influence
from .model import (
    BeliefState,
    InfluenceGraph,
    InitialBeliefs,
    SimulationTrace,
    StepBreakdown,
    StopReason,
    UpdateKind,
    confirmation_bias_step,
    gen_initial_beliefs,
    regular_step,
    run,
    step_breakdown,
)
from .polarization import BinSpec, Distribution, ERParams, discretize, er_measure, polarization_series

__version__ = "0.1.0"
