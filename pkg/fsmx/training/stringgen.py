from __future__ import absolute_import, division, print_function
from collections import OrderedDict
import numpy as np
from fsmx.automata.core import as_alphabet
from fsmx.training.quantitygen import (AbstractQuantityGenerator,
                                       FixedQuantityGenerator,
                                       UniformIntegerGenerator,
                                       UniformSupportLengthGenerator,
                                       _random_state)


class AbstractStringGenerator(object):
    """Produces one string per call.
    """

    def generateString(self):
        raise NotImplementedError()

    def getJsonableObject(self):
        """Get JSON object representation.

        Returns:
            A json-friendly object (built of dictionaries, lists and
        python primitives), which can be converted to json to
        record the exact details of what was generated.
        """
        raise NotImplementedError()


class RandomStringGenerator(AbstractStringGenerator):
    """Draws a length, then each symbol independently and uniformly.

    Arguments:
        alphabet: an :class:`.Alphabet`

        length: instance of :class:`.AbstractQuantityGenerator`.\
        If pass an int, will create a\
        :class:`.FixedQuantityGenerator` from the int.

        randomState: ``numpy.random.RandomState`` for the symbols
    """

    def __init__(self, alphabet, length, randomState=None):
        self.alphabet = as_alphabet(alphabet)
        if isinstance(length, int):
            self.length = FixedQuantityGenerator(length)
        else:
            assert isinstance(length, AbstractQuantityGenerator)
            self.length = length
        self.randomState = _random_state(randomState)

    def generateString(self):
        length = self.length.generateQuantity()
        return self.alphabet.decode(
            self.randomState.randint(len(self.alphabet), size=length))

    def getJsonableObject(self):
        """See superclass.
        """
        return OrderedDict([("class", "RandomStringGenerator"),
                            ("alphabet", self.alphabet.getJsonableObject()),
                            ("length", self.length.getJsonableObject())])


class UniformSupportStringGenerator(RandomStringGenerator):
    """Uniform draw from the finite support Σ^{≤maxLength}.

    Arguments:
        alphabet: an :class:`.Alphabet`

        maxLength: longest string length
    """

    def __init__(self, alphabet, maxLength, randomState=None):
        randomState = _random_state(randomState)
        alphabet = as_alphabet(alphabet)
        super(UniformSupportStringGenerator, self).__init__(
            alphabet,
            UniformSupportLengthGenerator(len(alphabet), maxLength,
                                          randomState=randomState),
            randomState=randomState)


class ClassConditionalStringGenerator(AbstractStringGenerator):
    """Uniform draw among the strings of bounded length that a DFA,
    started from a given state, labels with a given label.

    Counts of label-preserving continuations are built by dynamic
    programming over lengths, then the string is drawn symbol by
    symbol with probabilities proportional to those counts.

    Arguments:
        dfa: a :class:`.Dfa`

        label: the target acceptance

        maxLength: longest string length

        start: state to start from; defaults to the initial state

        minLength: shortest string length
    """

    def __init__(self, dfa, label, maxLength, start=None, minLength=0,
                 randomState=None):
        self.dfa = dfa
        self.label = bool(label)
        self.maxLength = maxLength
        self.minLength = minLength
        self.start = dfa.initial if start is None else start
        self.randomState = _random_state(randomState)
        # counts[l][q]: strings of length l leading from q to the label
        counts = [[int(dfa.isAccepting(q) == self.label)
                   for q in range(dfa.numStates)]]
        for length in range(1, maxLength + 1):
            previous = counts[-1]
            counts.append([sum(previous[int(x)] for x in dfa.delta[q])
                           for q in range(dfa.numStates)])
        self.counts = counts

    def countOfLength(self, length):
        return self.counts[length][self.start]

    def available(self):
        return any(self.countOfLength(l) > 0
                   for l in range(self.minLength, self.maxLength + 1))

    def _choose(self, weights):
        total = sum(weights)
        probs = np.array([float(x)/total for x in weights])
        return int(self.randomState.choice(len(weights), p=probs/probs.sum()))

    def generateStringOfLength(self, length):
        """None if no string of that length has the label.
        """
        if self.countOfLength(length) == 0:
            return None
        state = self.start
        indices = []
        for remaining in range(length, 0, -1):
            successors = [int(x) for x in self.dfa.delta[state]]
            idx = self._choose([self.counts[remaining - 1][x]
                                for x in successors])
            indices.append(idx)
            state = successors[idx]
        return self.dfa.alphabet.decode(indices)

    def generateString(self):
        lengths = list(range(self.minLength, self.maxLength + 1))
        weights = [self.countOfLength(l) for l in lengths]
        if sum(weights) == 0:
            return None
        return self.generateStringOfLength(lengths[self._choose(weights)])

    def getJsonableObject(self):
        """See superclass.
        """
        return OrderedDict([("class", "ClassConditionalStringGenerator"),
                            ("label", self.label),
                            ("start", self.start),
                            ("minLength", self.minLength),
                            ("maxLength", self.maxLength)])


class BalancedSuffixGenerator(AbstractStringGenerator):
    """Suffixes for one prefix with lengths uniform in [0, maxLength],
    alternating between the two labels the DFA gives the completed string.

    When the wanted label has no suffix of the drawn length, any length
    carrying that label is used; when the label is unreachable from the
    prefix state altogether, the other label is used.

    Arguments:
        dfa: a :class:`.Dfa`

        prefixState: state the DFA is in after the prefix

        maxLength: longest suffix
    """

    def __init__(self, dfa, prefixState, maxLength, randomState=None):
        self.randomState = _random_state(randomState)
        self.maxLength = maxLength
        self.prefixState = prefixState
        self.length = UniformIntegerGenerator(0, maxLength,
                                              randomState=self.randomState)
        self.byLabel = OrderedDict(
            (label, ClassConditionalStringGenerator(
                dfa, label, maxLength, start=prefixState,
                randomState=self.randomState))
            for label in (True, False))
        self.nextLabel = True

    def generateString(self):
        wanted = self.nextLabel
        self.nextLabel = not self.nextLabel
        if not self.byLabel[wanted].available():
            wanted = not wanted
        generator = self.byLabel[wanted]
        suffix = generator.generateStringOfLength(
            self.length.generateQuantity())
        if suffix is None:
            suffix = generator.generateString()
        return suffix

    def getJsonableObject(self):
        """See superclass.
        """
        return OrderedDict([("class", "BalancedSuffixGenerator"),
                            ("prefixState", self.prefixState),
                            ("maxLength", self.maxLength)])
