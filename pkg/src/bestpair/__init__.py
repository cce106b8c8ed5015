"""Best approximation pairs between two polyhedra via alternating HLWB sweeps."""
from .ahlwb import AuxStrategy, IterateTrace, pair_estimate, run
from .config import RunConfig, load_config, parse_config, preset
from .errors import (BestPairError, CapacityError, InputError, InvalidConstraintError,
                     StateError, UnsupportedPlotError)
from .geometry import HalfSpace, Polyhedron, project_halfspace, project_hyperplane
from .harness import export_trace, run_experiment
from .hlwb import ControlSequence, hlwb_project, sweep
from .kernels import BACKEND
from .oracle import BapCertificate, certify_pair, cheney_goldstein, exact_project
from .schedule import LambdaSchedule, SweepSchedule, validate_lambda, z_bound_estimate
from .svg import plot_trace

__version__ = "0.1.0"

__all__ = [
    "AuxStrategy", "BACKEND", "BapCertificate", "BestPairError", "CapacityError",
    "ControlSequence", "HalfSpace", "InputError", "InvalidConstraintError", "IterateTrace",
    "LambdaSchedule", "Polyhedron", "RunConfig", "StateError", "SweepSchedule",
    "UnsupportedPlotError", "certify_pair", "cheney_goldstein", "exact_project",
    "export_trace", "hlwb_project", "load_config", "pair_estimate", "parse_config",
    "plot_trace", "preset", "project_halfspace", "project_hyperplane", "run",
    "run_experiment", "sweep", "validate_lambda", "z_bound_estimate",
]
