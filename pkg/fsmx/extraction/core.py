from __future__ import absolute_import, division, print_function
from collections import OrderedDict
import time
import fsmx
from fsmx.automata.core import Dfa, dfa_minimize

QUANTIZATION = "quantization"
CLUSTERING = "clustering"
LSTAR = "lstar"
METHODS = (QUANTIZATION, CLUSTERING, LSTAR)


class ExtractionConfig(object):
    """Settings shared by the extractors.

    Arguments:
        method: ``"quantization"``, ``"clustering"`` or ``"lstar"``

        resolution: grid cells per dimension (quantization)

        clusters: K (clustering)

        budget: hidden vectors collected (clustering)

        maxDepth: BFS depth bound (quantization, clustering)

        refinementBudget: partition splits allowed (lstar)

        initialSplits: rounds of midpoint splits of the initial
    partition (lstar)

        cellCap: largest grid tolerated before giving up (quantization)

        explorationBudget: oracle states visited per equivalence
    query (lstar)

        equivalenceSamples: random words compared per equivalence
    query (lstar)

        equivalenceBudget: equivalence queries allowed (lstar)

        seed: random seed
    """

    def __init__(self, method=LSTAR, resolution=2, clusters=10, budget=1000,
                 maxDepth=10, refinementBudget=100, initialSplits=0,
                 cellCap=10**5, explorationBudget=2000,
                 equivalenceSamples=1000, equivalenceBudget=100,
                 seed=fsmx.DEFAULT_SEED):
        if method not in METHODS:
            raise ValueError("method must be one of "+str(METHODS))
        if resolution < 1:
            raise ValueError("resolution must be at least 1")
        if clusters < 1:
            raise ValueError("clusters must be at least 1")
        if maxDepth < 1:
            raise ValueError("maxDepth must be at least 1")
        if refinementBudget < 0 or initialSplits < 0:
            raise ValueError("refinementBudget and initialSplits must be"
                             " nonnegative")
        if cellCap < 1 or explorationBudget < 1 or equivalenceBudget < 1:
            raise ValueError("cellCap, explorationBudget and"
                             " equivalenceBudget must be positive")
        self.method = method
        self.resolution = resolution
        self.clusters = clusters
        self.budget = budget
        self.maxDepth = maxDepth
        self.refinementBudget = refinementBudget
        self.initialSplits = initialSplits
        self.cellCap = cellCap
        self.explorationBudget = explorationBudget
        self.equivalenceSamples = equivalenceSamples
        self.equivalenceBudget = equivalenceBudget
        self.seed = seed

    def withMethod(self, method):
        obj = self.getJsonableObject()
        obj["method"] = method
        return ExtractionConfig.fromJsonable(obj)

    def getJsonableObject(self):
        return OrderedDict([("method", self.method),
                            ("resolution", self.resolution),
                            ("clusters", self.clusters),
                            ("budget", self.budget),
                            ("maxDepth", self.maxDepth),
                            ("refinementBudget", self.refinementBudget),
                            ("initialSplits", self.initialSplits),
                            ("cellCap", self.cellCap),
                            ("explorationBudget", self.explorationBudget),
                            ("equivalenceSamples", self.equivalenceSamples),
                            ("equivalenceBudget", self.equivalenceBudget),
                            ("seed", self.seed)])

    @classmethod
    def fromJsonable(cls, obj):
        return cls(**obj)


class ExtractionResult(object):
    """An extracted DFA plus how it was obtained.

    Arguments:
        dfa: the minimized :class:`.Dfa`

        method: extractor name

        config: the :class:`.ExtractionConfig` used

        runtimeMs: wall-clock time

        converged: False when a budget ran out first

        membershipQueries, equivalenceQueries: oracle queries made

        conflictsResolved: observations overruled by a majority vote

        extra: OrderedDict of extractor-specific statistics
    """

    def __init__(self, dfa, method, config, runtimeMs=0.0, converged=True,
                 membershipQueries=0, equivalenceQueries=0,
                 conflictsResolved=0, extra=None):
        self.dfa = dfa
        self.method = method
        self.config = config
        self.runtimeMs = runtimeMs
        self.converged = converged
        self.membershipQueries = membershipQueries
        self.equivalenceQueries = equivalenceQueries
        self.conflictsResolved = conflictsResolved
        self.extra = OrderedDict() if extra is None else extra

    def getJsonableObject(self, omitTiming=False):
        return OrderedDict([
            ("dfa", self.dfa.getJsonableObject()),
            ("method", self.method),
            ("config", self.config.getJsonableObject()),
            ("runtime_ms", 0.0 if omitTiming else self.runtimeMs),
            ("converged", self.converged),
            ("queries", OrderedDict([
                ("membership", self.membershipQueries),
                ("equivalence", self.equivalenceQueries)])),
            ("conflicts_resolved", self.conflictsResolved),
            ("extra", self.extra)])


class Stopwatch(object):

    def __init__(self):
        self.start = time.time()

    def elapsedMs(self):
        return (time.time() - self.start)*1000.0


def dfa_from_table(alphabet, delta, labels, initial=0):
    """Minimized DFA from a transition table and per-state labels.
    """
    accepting = [i for (i, x) in enumerate(labels) if x]
    return dfa_minimize(Dfa(alphabet, delta, initial, accepting))


def extract(oracle, cfg):
    """Run the extractor ``cfg.method`` names.

    Returns:
        an :class:`.ExtractionResult`
    """
    from fsmx.extraction.quantization import extract_quantization
    from fsmx.extraction.clustering import extract_clustering
    from fsmx.extraction.lstar import extract_lstar
    return {QUANTIZATION: extract_quantization,
            CLUSTERING: extract_clustering,
            LSTAR: extract_lstar}[cfg.method](oracle, cfg)
