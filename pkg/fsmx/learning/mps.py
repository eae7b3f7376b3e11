from __future__ import absolute_import, division, print_function
from collections import OrderedDict
import math
from fsmx.learning.rpni import rpni


def mps_query_count(numSymbols, c, epsilon):
    """Queries needed so the top strings cover mass 1 - ε under a
    distribution with P(|x| >= t) <= exp(-c t).

    Returns:
        (n, t): t = ceil((1/c) ln(1/ε)) and n = Σ_{l<t} |Σ|^l
    """
    if c <= 0 or not 0 < epsilon < 1:
        raise ValueError("Need c > 0 and epsilon in (0, 1)")
    t = int(math.ceil(math.log(1/epsilon)/c))
    return sum(numSymbols**length for length in range(t)), t


class MpsResult(object):
    """Outcome of :func:`learn_mps`.

    Arguments:
        dfa: automaton consistent with the queried strings

        queries: list of (string, probability, label)
    """

    def __init__(self, dfa, queries):
        self.dfa = dfa
        self.queries = queries

    @property
    def coveredMass(self):
        return sum((p for (w, p, label) in self.queries), 0)

    @property
    def riskBound(self):
        """L_P(dfa) <= 1 - covered mass."""
        return 1 - self.coveredMass

    def getJsonableObject(self):
        return OrderedDict([("dfa", self.dfa.getJsonableObject()),
                            ("queries", len(self.queries)),
                            ("covered_mass", float(self.coveredMass)),
                            ("risk_bound", float(self.riskBound))])


def learn_mps(lm, membership, numQueries):
    """Label the ``numQueries`` most probable strings of ``lm`` with
    ``membership`` and return an RPNI automaton consistent with them.

    Raises:
        SupportExhaustedError: ``lm`` has fewer strings than asked for
    """
    if numQueries < 0:
        raise ValueError("numQueries must be nonnegative")
    top = lm.mostProbable(numQueries) if numQueries > 0 else []
    queries = [(w, p, bool(membership(w))) for (w, p) in top]
    dfa = rpni([(w, label) for (w, p, label) in queries], lm.alphabet)
    return MpsResult(dfa, queries)
