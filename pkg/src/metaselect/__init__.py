"""Per-instance algorithm selection with ensembles and a meta level.

The package turns runtime scenarios (measured algorithm runtimes with a
cutoff, instance features, CV folds) into penalized-runtime scores for
algorithm selectors, ensembles of selectors, and learned
selector-selectors.
"""

from .aslib import load_scenario, write_scenario
from .approaches import build_approach, canonical_approach_spec, parse_approach
from .config import ExperimentConfig, config_from_mapping, load_config
from .ensembles import (
    BaggingEnsemble,
    BoostingEnsemble,
    StackingEnsemble,
    VotingEnsemble,
)
from .errors import MetaselectError
from .meta import AlgorithmSelectorSelector, MetaScenario, build_meta_scenario
from .metrics import (
    SelectionTrace,
    as_oracle_par10,
    npar10,
    oracle_par10,
    score_trace,
    single_best,
    trace_par10,
)
from .report import EvaluationReport, emit_report
from .runner import run_experiment, sweep_voting
from .scenario import ScenarioSpec
from .selectors import Selector, canonical_selector_spec, make_selector
from .synthetic import SyntheticConfig, generate_synthetic

__version__ = "0.1.0"

__all__ = [
    "AlgorithmSelectorSelector",
    "BaggingEnsemble",
    "BoostingEnsemble",
    "EvaluationReport",
    "ExperimentConfig",
    "MetaScenario",
    "MetaselectError",
    "ScenarioSpec",
    "SelectionTrace",
    "Selector",
    "StackingEnsemble",
    "SyntheticConfig",
    "VotingEnsemble",
    "as_oracle_par10",
    "build_approach",
    "build_meta_scenario",
    "canonical_approach_spec",
    "canonical_selector_spec",
    "config_from_mapping",
    "emit_report",
    "generate_synthetic",
    "load_config",
    "load_scenario",
    "make_selector",
    "npar10",
    "oracle_par10",
    "parse_approach",
    "run_experiment",
    "score_trace",
    "single_best",
    "sweep_voting",
    "trace_par10",
    "write_scenario",
]
