from __future__ import absolute_import, division, print_function
from collections import OrderedDict
from fractions import Fraction
import itertools
import numpy as np
from scipy.special import expit
from fsmx.fsmxutil import util
from fsmx.automata.core import Dfa, as_alphabet
from fsmx.automata.weighted import Wfa
from fsmx.rnn.model import RnnModel, LM, softmax2

#largest |Σ|^N swept exhaustively
ENUMERATION_GUARD = 10**7
EQUALITY_TOLERANCE = 1e-12

YES = "yes"
NO = "no"
INCONCLUSIVE = "inconclusive"


def model_alphabet(model, alphabet=None):
    if alphabet is not None:
        return as_alphabet(alphabet)
    if hasattr(model, "alphabet"):
        return model.alphabet
    raise ValueError("Pass the alphabet of "+str(type(model)))


def _dfa_levels(dfa):
    states = np.array([dfa.initial])
    while True:
        yield dfa.acceptingMask[states]
        states = dfa.delta[states].reshape(-1)


def _hidden_logits(model, states):
    hidden = model.kind.hiddenPart(states, model.dim)
    return hidden.dot(model.weights["O"].T) + model.weights["Ob"]


def _step_all_symbols(model, states, numSymbols):
    repeated = np.repeat(states, numSymbols, axis=0)
    symbols = np.tile(np.arange(numSymbols), len(states))
    return model.stepBatch(repeated, symbols)


def _recognizer_levels(model):
    numSymbols = len(model.alphabet)
    states = model.initialState()[None, :]
    while True:
        yield expit(_hidden_logits(model, states)[:, 0]) > 0.5
        states = _step_all_symbols(model, states, numSymbols)


def _lm_levels(model):
    numSymbols = len(model.alphabet)
    endIdx = numSymbols
    states = model.stepBatch(model.initialState()[None, :], [endIdx])
    prefix = np.ones(1)
    while True:
        probs = softmax2(_hidden_logits(model, states))
        yield prefix*probs[:, endIdx]
        prefix = (prefix[:, None]*probs[:, :numSymbols]).reshape(-1)
        states = _step_all_symbols(model, states, numSymbols)


def _exact_wfa_levels(wfa):
    forwards = [wfa.initialForward()]
    numSymbols = len(wfa.alphabet)
    while True:
        yield np.array([wfa.readout(x) for x in forwards], dtype=object)
        forwards = [wfa.forwardStep(x, k) for x in forwards
                    for k in range(numSymbols)]


def _callable_levels(fn, alphabet):
    for length in itertools.count():
        yield np.array([fn(w) for w in alphabet.stringsOfLength(length)])


def iter_levels(model, alphabet=None):
    """Endless iterator over arrays of model values, one array per
    string length, each in lexicographic order.

    Recognizers (DFAs, recognizer RNNs) give booleans; weighted models
    give weights (exact ``Fraction`` objects for exact automata).
    """
    if isinstance(model, Dfa):
        return _dfa_levels(model)
    if isinstance(model, RnnModel):
        if model.head == LM:
            return _lm_levels(model)
        return _recognizer_levels(model)
    if isinstance(model, Wfa):
        if model.exact:
            return _exact_wfa_levels(model)
        return model.levelWeights(None)
    return _callable_levels(model, model_alphabet(model, alphabet))


def check_guard(alphabet, maxLength):
    if len(alphabet)**maxLength > ENUMERATION_GUARD:
        raise util.GuardExceededError(
            "|Σ|^N = "+str(len(alphabet))+"^"+str(maxLength)
            +" exceeds the enumeration guard of "+str(ENUMERATION_GUARD))


def level_values(model, maxLength, alphabet=None):
    """Values for lengths 0..maxLength; see :func:`iter_levels`.
    """
    check_guard(model_alphabet(model, alphabet), maxLength)
    return itertools.islice(iter_levels(model, alphabet), maxLength + 1)


def string_at(alphabet, length, index):
    """The ``index``-th string of Σ^length in lexicographic order.
    """
    digits = []
    for i in range(length):
        index, digit = divmod(index, len(alphabet))
        digits.append(digit)
    return alphabet.decode(reversed(digits))


def _shared_alphabet(a, b, alphabet):
    alphabetA = model_alphabet(a, alphabet)
    alphabetB = model_alphabet(b, alphabet)
    if alphabetA.symbols != alphabetB.symbols:
        raise util.AlphabetMismatchError(
            "Models over "+repr(list(alphabetA.symbols))+" and "
            +repr(list(alphabetB.symbols)))
    return alphabetA


def _as_numbers(values):
    if values.dtype == bool:
        return values.astype(float)
    return values


def _first_argmax(values):
    if values.dtype == object:
        best = 0
        for i in range(1, len(values)):
            if values[i] > values[best]:
                best = i
        return best
    return int(np.argmax(values))


def _scalar(value):
    if isinstance(value, Fraction):
        return value
    return float(value)


def dist_inf_finite(a, b, maxLength, alphabet=None):
    """max |a(w) - b(w)| over Σ^{≤maxLength}.

    Returns:
        (value, witness) with the first maximizing string in
    length-lexicographic order

    Raises:
        GuardExceededError: |Σ|^maxLength above ``ENUMERATION_GUARD``
    """
    alphabet = _shared_alphabet(a, b, alphabet)
    check_guard(alphabet, maxLength)
    best = None
    for length, (valuesA, valuesB) in enumerate(zip(
            level_values(a, maxLength, alphabet),
            level_values(b, maxLength, alphabet))):
        gaps = abs(_as_numbers(valuesA) - _as_numbers(valuesB))
        idx = _first_argmax(gaps)
        if best is None or gaps[idx] > best[0]:
            best = (_scalar(gaps[idx]), string_at(alphabet, length, idx))
    return best


def _differs(valueA, valueB, tolerance):
    if isinstance(valueA, (bool, np.bool_))\
            or isinstance(valueB, (bool, np.bool_)):
        return bool(valueA) != bool(valueB)
    return abs(valueA - valueB) > tolerance


def eq_finite(a, b, maxLength, alphabet=None,
              tolerance=EQUALITY_TOLERANCE):
    """Compare two models on Σ^{≤maxLength}.

    Returns:
        None if they agree everywhere (weights within ``tolerance``,
    recognizer verdicts exactly), else the first disagreeing string in
    length-lexicographic order
    """
    alphabet = _shared_alphabet(a, b, alphabet)
    check_guard(alphabet, maxLength)
    for length, (valuesA, valuesB) in enumerate(zip(
            level_values(a, maxLength, alphabet),
            level_values(b, maxLength, alphabet))):
        for idx in range(len(valuesA)):
            if _differs(valuesA[idx], valuesB[idx], tolerance):
                return string_at(alphabet, length, idx)
    return None


class TchebychevResult(object):
    """Outcome of :func:`tchebychev_enumerate`.

    Arguments:
        verdict: ``"yes"``, ``"no"`` or ``"inconclusive"``

        witness: string with |a(w) - b(w)| > c for ``"yes"``

        examined: strings enumerated

        massA, massB: cumulative weights of the enumerated strings
    """

    def __init__(self, verdict, witness, examined, massA, massB):
        self.verdict = verdict
        self.witness = witness
        self.examined = examined
        self.massA = massA
        self.massB = massB

    def getJsonableObject(self):
        return OrderedDict([("verdict", self.verdict),
                            ("witness", self.witness),
                            ("examined", self.examined),
                            ("massA", float(self.massA)),
                            ("massB", float(self.massB))])


def tchebychev_enumerate(a, b, c, cap=10**6, alphabet=None):
    """Search Σ* in length-lexicographic order for a string on which two
    consistent weighted models differ by more than ``c``.

    Stops with ``"no"`` once both cumulative masses reach 1 - c, since
    every string not yet seen then weighs at most c in both models.
    Returns ``"inconclusive"`` after ``cap`` strings.
    """
    if c <= 0:
        raise ValueError("c must be positive")
    alphabet = _shared_alphabet(a, b, alphabet)
    massA = 0.0
    massB = 0.0
    examined = 0
    for length, (valuesA, valuesB) in enumerate(zip(
            iter_levels(a, alphabet), iter_levels(b, alphabet))):
        for idx in range(len(valuesA)):
            if examined >= cap:
                return TchebychevResult(INCONCLUSIVE, None, examined,
                                        massA, massB)
            examined += 1
            valueA = float(valuesA[idx])
            valueB = float(valuesB[idx])
            if abs(valueA - valueB) > c:
                return TchebychevResult(YES, string_at(alphabet, length, idx),
                                        examined, massA + valueA,
                                        massB + valueB)
            massA += valueA
            massB += valueB
            if massA >= 1 - c and massB >= 1 - c:
                return TchebychevResult(NO, None, examined, massA, massB)


def model_mass(model, maxLength, alphabet=None):
    """Σ_{|w| <= maxLength} weight(w), level by level.
    """
    total = 0
    for values in level_values(model, maxLength, alphabet):
        total = total + sum(values)
    return _scalar(total)


def cut_language_intersection(model, dfa, c, maxLength):
    """First string of Σ^{≤maxLength} in length-lexicographic order with
    weight above ``c`` that ``dfa`` accepts, or None.
    """
    alphabet = _shared_alphabet(model, dfa, None)
    check_guard(alphabet, maxLength)
    for length, (weights, accepted) in enumerate(zip(
            level_values(model, maxLength, alphabet),
            level_values(dfa, maxLength, alphabet))):
        for idx in range(len(weights)):
            if accepted[idx] and weights[idx] > c:
                return string_at(alphabet, length, idx)
    return None
