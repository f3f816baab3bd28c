"""Keyword-set rule classifiers with Bernoulli precision estimates.

Each class is described by a small set of key sub-strings. A document induces
a partition of that set (patterns present / absent); the training counts of
each partition give a precision estimate that can be t-tested, combined across
classes with Dempster's rule, and used to gate classification decisions.
"""

from .classifier import Decision, Gate, MultiClassModel, audit_report, classify, evaluate
from .corpus import LabeledDocument, load_reuters, load_simple, toy_corpus
from .estimator import GatedRuleClassifier, TextNormalizer
from .evidence import ClassFrame, CombinedMass, belief_plausibility, combine_bruteforce, combine_feasible
from .partition import ClassModel, PartitionStats, WordSet, count_corpus, induce, lookup, precision
from .stats import one_sided_t, one_sided_test, t_critical, two_sided_t
from .textkit import contains, normalize
from .trainer import FitnessReport, SearchConfig, fitness, prefer, search

__version__ = "0.1.0"

__all__ = [
    "ClassFrame",
    "ClassModel",
    "CombinedMass",
    "Decision",
    "FitnessReport",
    "Gate",
    "GatedRuleClassifier",
    "LabeledDocument",
    "MultiClassModel",
    "PartitionStats",
    "SearchConfig",
    "TextNormalizer",
    "WordSet",
    "audit_report",
    "belief_plausibility",
    "classify",
    "combine_bruteforce",
    "combine_feasible",
    "contains",
    "count_corpus",
    "evaluate",
    "fitness",
    "induce",
    "load_reuters",
    "load_simple",
    "lookup",
    "normalize",
    "one_sided_t",
    "one_sided_test",
    "precision",
    "prefer",
    "search",
    "t_critical",
    "toy_corpus",
    "two_sided_t",
]
