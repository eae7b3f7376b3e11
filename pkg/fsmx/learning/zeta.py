from __future__ import absolute_import, division, print_function
from collections import OrderedDict
from fractions import Fraction
from fsmx.fsmxutil import util
from fsmx.distances.finite import level_values
from fsmx.learning.reference import FiniteSupportLm, DpfaLm
from fsmx.learning.srm import WeightedStrings, table_count, ENUMERATION_LIMIT

#strings of length up to this are summed for DPFA references
DEFAULT_TRUNCATION = 12
#largest size cap for DFA enumeration over a binary alphabet
BINARY_SIZE_CAP = 4


def _label(target, w):
    return bool(target(w))


def expected_risk(dfa, lm, target, truncation=DEFAULT_TRUNCATION):
    """L_P(dfa): probability under ``lm`` that ``dfa`` and ``target``
    disagree.

    Exact (in the probabilities' own arithmetic) for finite-support
    references; DPFA references are summed over Σ^{≤truncation}.
    """
    if isinstance(lm, FiniteSupportLm):
        return sum((p for (w, p) in lm.items()
                    if dfa.run(w) != _label(target, w)), Fraction(0))
    if isinstance(lm, DpfaLm):
        total = 0
        levels = zip(level_values(lm.pfa, truncation),
                     level_values(dfa, truncation),
                     level_values(target, truncation, lm.alphabet))
        for (weights, accepted, labels) in levels:
            for idx in range(len(weights)):
                if bool(accepted[idx]) != bool(labels[idx]):
                    total = total + weights[idx]
        return total
    raise util.UnsupportedModelError("Cannot compute the risk under "
                                     +str(type(lm)))


def _require_finite(lm):
    if not isinstance(lm, FiniteSupportLm):
        raise util.UnsupportedModelError(
            "Exact risks need a finite-support reference, got "
            +str(type(lm)))


def _check_cap(alphabet, sizeCap):
    if sizeCap < 1:
        raise ValueError("sizeCap must be at least 1")
    if len(alphabet) == 2 and sizeCap > BINARY_SIZE_CAP:
        raise util.GuardExceededError(
            "Size cap "+str(sizeCap)+" above "+str(BINARY_SIZE_CAP)
            +" for a binary alphabet")
    if table_count(sizeCap, len(alphabet)) > ENUMERATION_LIMIT:
        raise util.GuardExceededError(
            "DFAs of size "+str(sizeCap)+" over "+str(len(alphabet))
            +" symbols are too many to enumerate")


def best_risks_by_size(lm, target, sizeCap):
    """Least exact risk of a DFA of each size 1..sizeCap.

    Returns:
        OrderedDict size -> (risk, :class:`.Dfa`)
    """
    _require_finite(lm)
    _check_cap(lm.alphabet, sizeCap)
    strings = WeightedStrings(lm.alphabet, ((w, _label(target, w), p)
                                            for (w, p) in lm.items()))
    result = OrderedDict()
    for numStates in range(1, sizeCap + 1):
        dfa = strings.bestDfaOfSize(numStates)[1]
        result[numStates] = (expected_risk(dfa, lm, target), dfa)
    return result


def estimate_zeta(lm, target, epsilon, sizeCap=BINARY_SIZE_CAP):
    """Smallest size of a DFA whose risk is below inf + ε, the infimum
    taken over all DFAs of at most ``sizeCap`` states.
    """
    bySize = best_risks_by_size(lm, target, sizeCap)
    infimum = min(x[0] for x in bySize.values())
    for numStates, (risk, dfa) in bySize.items():
        if risk < infimum + epsilon:
            return numStates


def oracle_verdict(candidate, lm, target, epsilon, realizable=True,
                   sizeCap=BINARY_SIZE_CAP):
    """Whether L_P(candidate) is within ε of the best achievable risk.

    The best risk is 0 when ``realizable``; otherwise it is the least
    risk over DFAs of at most ``sizeCap`` states, since the infimum over
    all DFAs is not computable.

    Raises:
        UnsupportedModelError: ``lm`` does not have finite support
    """
    _require_finite(lm)
    risk = expected_risk(candidate, lm, target)
    if realizable:
        return risk <= epsilon
    infimum = min(x[0] for x in best_risks_by_size(lm, target,
                                                   sizeCap).values())
    return risk <= infimum + epsilon
