from .law import run_compare, run_limit_law
from .limit import run_limit_compare, run_limit_sim
from .pool import map_replications
from .runner import CommandResult, ExperimentRunner, RunOutcome
from .simulate import run_simulate
from .sweep import run_scale_sweep
from .verify import run_suites, run_verify

COMMANDS = {
    "simulate": (run_simulate, ("simulate",)),
    "scale-sweep": (run_scale_sweep, ("sweep",)),
    "limit-sim": (run_limit_sim, ("limit",)),
    "limit-law": (run_limit_law, ("law",)),
    "compare": (run_compare, ("compare",)),
    "verify": (run_verify, ("simulate", "verify")),
    "limit-compare": (run_limit_compare, ("limit", "compare")),
}

__all__ = [
    "COMMANDS",
    "CommandResult",
    "ExperimentRunner",
    "RunOutcome",
    "map_replications",
    "run_compare",
    "run_limit_compare",
    "run_limit_law",
    "run_limit_sim",
    "run_scale_sweep",
    "run_simulate",
    "run_suites",
    "run_verify",
]
