from __future__ import absolute_import, division, print_function
from collections import OrderedDict
from fractions import Fraction
import heapq
import numpy as np
from fsmx.fsmxutil import util
from fsmx.automata.core import as_alphabet
from fsmx.automata.weighted import Pfa

#longest string drawn by DpfaLm.sample before giving up
MAX_SAMPLE_LENGTH = 10**4


class AbstractReferenceLm(object):
    """A probability distribution over Σ* that learners can query.

    Arguments:
        alphabet: an :class:`.Alphabet`
    """

    def __init__(self, alphabet):
        self.alphabet = as_alphabet(alphabet)

    def prob(self, w):
        raise NotImplementedError()

    def sample(self, randomState):
        raise NotImplementedError()

    def mostProbable(self, count, history=()):
        """The ``count`` most probable strings outside ``history``.

        Returns:
            list of (string, probability), probabilities nonincreasing;
        ties are ordered by length, then lexicographically
        """
        raise NotImplementedError()

    @property
    def finiteSupport(self):
        return False

    def getJsonableObject(self):
        raise NotImplementedError()


def _sort_key(alphabet, w, p):
    indices = tuple(alphabet.encode(w))
    return (-p, len(indices), indices)


class FiniteSupportLm(AbstractReferenceLm):
    """Distribution given by an explicit table of string probabilities.

    Arguments:
        alphabet: an :class:`.Alphabet`

        probs: mapping string -> probability; zero entries are dropped
    """

    def __init__(self, alphabet, probs):
        super(FiniteSupportLm, self).__init__(alphabet)
        self.probs = OrderedDict()
        for w, p in probs.items():
            self.alphabet.encode(w)
            if p < 0:
                raise ValueError("Negative probability for "+repr(w))
            if p > 0:
                self.probs[w] = p
        total = sum(self.probs.values())
        if total > 1 + 1e-9:
            raise ValueError("Probabilities sum to "+str(float(total)))

    @classmethod
    def uniform(cls, alphabet, maxLength):
        """Uniform distribution over Σ^{≤maxLength}, in exact rationals.
        """
        alphabet = as_alphabet(alphabet)
        p = Fraction(1, alphabet.countUpTo(maxLength))
        return cls(alphabet, OrderedDict((w, p) for w
                                         in alphabet.strings(maxLength)))

    @classmethod
    def fromSample(cls, alphabet, strings):
        """Empirical distribution of a list of strings."""
        counts = OrderedDict()
        for w in strings:
            counts[w] = counts.get(w, 0) + 1
        return cls(alphabet, OrderedDict((w, Fraction(c, len(strings)))
                                         for (w, c) in counts.items()))

    @property
    def finiteSupport(self):
        return True

    @property
    def support(self):
        return list(self.probs)

    def items(self):
        return self.probs.items()

    def prob(self, w):
        return self.probs.get(w, 0)

    def sample(self, randomState):
        strings = list(self.probs)
        weights = np.array([float(x) for x in self.probs.values()])
        return strings[util.sampleFromProbsArr(weights, randomState)]

    def mostProbable(self, count, history=()):
        history = set(history)
        ranked = sorted(((w, p) for (w, p) in self.probs.items()
                         if w not in history),
                        key=lambda x: _sort_key(self.alphabet, x[0], x[1]))
        if count > len(ranked):
            raise util.SupportExhaustedError(
                "Asked for "+str(count)+" strings but only "
                +str(len(ranked))+" remain in the support")
        return ranked[:count]

    def getJsonableObject(self):
        return OrderedDict([("class", "FiniteSupportLm"),
                            ("alphabet", self.alphabet.getJsonableObject()),
                            ("supportSize", len(self.probs))])


class DpfaLm(AbstractReferenceLm):
    """Distribution of a (deterministic) PFA.

    Arguments:
        pfa: a :class:`.Pfa`; most-probable search assumes it is
    consistent so that prefix masses bound their completions
    """

    def __init__(self, pfa):
        assert isinstance(pfa, Pfa)
        super(DpfaLm, self).__init__(pfa.alphabet)
        self.pfa = pfa

    def prob(self, w):
        return self.pfa.weight(w)

    def prefixMass(self, w):
        return self.pfa.prefixWeight(w)

    def sample(self, randomState):
        """Walk the automaton from a state drawn from the initial vector,
        stopping with the final weight of the current state.
        """
        pfa = self.pfa
        state = util.sampleFromProbsArr(
            np.array([float(x) for x in pfa.alpha]), randomState)
        symbols = []
        for i in range(MAX_SAMPLE_LENGTH):
            events = [(None, None, float(pfa.final[state]))]
            for k, matrix in enumerate(pfa.matrices):
                for target in range(pfa.dim):
                    if matrix[state, target] != 0:
                        events.append((k, target,
                                       float(matrix[state, target])))
            choice = events[util.sampleFromProbsArr(
                np.array([x[2] for x in events]), randomState)]
            if choice[0] is None:
                return self.alphabet.decode(symbols)
            symbols.append(choice[0])
            state = choice[1]
        raise util.FsmxError("No stop after "+str(MAX_SAMPLE_LENGTH)
                             +" symbols")

    def mostProbable(self, count, history=()):
        """Best-first search over the prefix tree.

        The frontier holds complete strings keyed by their probability
        and prefixes keyed by the mass of all their completions; a
        string popped from the frontier is at least as probable as
        every string not yet emitted.

        Raises:
            SupportExhaustedError: fewer than ``count`` strings of
        positive probability outside ``history``
        """
        history = set(history)
        numSymbols = len(self.alphabet)
        result = []
        # (−value, length, symbol indices, 0 for strings / 1 for prefixes)
        frontier = [(-1.0, 0, (), 1)]
        while frontier and len(result) < count:
            negValue, length, indices, isPrefix = heapq.heappop(frontier)
            w = self.alphabet.decode(indices)
            if not isPrefix:
                if w not in history:
                    result.append((w, self.prob(w)))
                continue
            p = self.prob(w)
            if p > 0:
                heapq.heappush(frontier, (-float(p), length, indices, 0))
            for k in range(numSymbols):
                extension = indices + (k,)
                mass = self.prefixMass(self.alphabet.decode(extension))
                if mass > 0:
                    heapq.heappush(frontier,
                                   (-mass, length + 1, extension, 1))
        if len(result) < count:
            raise util.SupportExhaustedError(
                "Only "+str(len(result))+" strings of positive probability"
                " remain outside the history")
        return result

    def getJsonableObject(self):
        return OrderedDict([("class", "DpfaLm"),
                            ("pfa", self.pfa.getJsonableObject())])


def most_probable_strings(lm, count, history=()):
    """The ``count`` most probable strings of ``lm`` outside ``history``,
    in nonincreasing order of probability.
    """
    return [w for (w, p) in lm.mostProbable(count, history)]


def as_reference_lm(source):
    if isinstance(source, AbstractReferenceLm):
        return source
    if isinstance(source, Pfa):
        return DpfaLm(source)
    raise ValueError("Cannot use "+str(type(source))+" as a reference LM")
