"""Exact inference for generative Datalog with stable negation."""

from .chase import Budget, explore
from .dist import BUILTINS, DistributionRegistry
from .ground import ChoiceSet, PerfectGrounder, SimpleGrounder, make_grounder, stratify
from .model import Atom, Const, Database, GProgram, GRule, GroundRule, attach_database, atom
from .parser import parse_database, parse_distributions, parse_program
from .prob import InferenceConfig, OutcomeDistribution, as_good_as, build_distribution, infer, query
from .stable import all_stable_models
from .translate import translate_program

__all__ = [
    "Atom", "BUILTINS", "Budget", "ChoiceSet", "Const", "Database", "DistributionRegistry", "GProgram",
    "GRule", "GroundRule", "InferenceConfig", "OutcomeDistribution", "PerfectGrounder", "SimpleGrounder",
    "all_stable_models", "as_good_as", "atom", "attach_database", "build_distribution", "explore", "infer",
    "make_grounder", "parse_database", "parse_distributions", "parse_program", "query", "stratify",
    "translate_program",
]
