from __future__ import absolute_import, division, print_function
from collections import OrderedDict
import numpy as np
from fsmx.fsmxutil import util
from fsmx.automata.core import as_alphabet
from fsmx.rnn.cells import CellKind
from fsmx.rnn.model import RnnModel, RECOGNIZER


class AbstractStateMachineOracle(object):
    """A sequential machine seen through its hidden vectors.

    Extractors only use ``initial``, ``step`` and ``classify``;
    ``features`` maps a hidden vector to the point the state-space
    abstractions (grids, clusters, partitions) work on.
    """

    def __init__(self, alphabet):
        self.alphabet = as_alphabet(alphabet)

    def initial(self):
        raise NotImplementedError()

    def step(self, vector, symbol):
        raise NotImplementedError()

    def classify(self, vector):
        raise NotImplementedError()

    def features(self, vector):
        return np.asarray(vector, dtype=float)

    def isBounded(self):
        """True if ``features`` always lies in [0, 1]^d."""
        raise NotImplementedError()

    def stepAll(self, vectors, symbol):
        """``step`` applied to every row of ``vectors``.
        """
        return np.array([self.step(x, symbol) for x in vectors])

    def run(self, w, vector=None):
        vector = self.initial() if vector is None else vector
        for symbol in self.alphabet.split(w):
            vector = self.step(vector, symbol)
        return vector

    def membership(self, w):
        return bool(self.classify(self.run(w)))

    def __call__(self, w):
        return self.membership(w)

    def getJsonableObject(self):
        raise NotImplementedError()


class RnnOracle(AbstractStateMachineOracle):
    """Wraps a recognizer :class:`.RnnModel`.

    Features are the hidden part of the state (the h half for LSTMs),
    rescaled from the activation range to [0, 1]; relu features are
    left as they are and are unbounded.
    """

    def __init__(self, model):
        if model.head != RECOGNIZER:
            raise util.UnsupportedModelError(
                "Extraction needs a recognizer head")
        super(RnnOracle, self).__init__(model.alphabet)
        self.model = model
        self._symbolIdx = dict((x, model.symbolIndex(x))
                               for x in self.alphabet)

    def initial(self):
        return self.model.initialState()

    def step(self, vector, symbol):
        return self.model.step(vector, symbol)

    def stepAll(self, vectors, symbol):
        vectors = np.asarray(vectors, dtype=float)
        return self.model.stepBatch(
            vectors, [self._symbolIdx[symbol]]*len(vectors))

    def classify(self, vector):
        return self.model.accepts(vector)

    def isBounded(self):
        return self.model.kind.isBounded()

    def features(self, vector):
        hidden = np.asarray(self.model.hidden(vector), dtype=float)
        if not self.isBounded():
            return hidden
        low, high = self.model.kind.hiddenRange()
        return (hidden - low)/(high - low)

    def getJsonableObject(self):
        return OrderedDict([("class", "RnnOracle"),
                            ("kind", self.model.kind.name),
                            ("dim", self.model.dim)])


class DfaEmbeddingOracle(AbstractStateMachineOracle):
    """A DFA whose hidden vectors are one-hot state indicators.
    """

    def __init__(self, dfa):
        super(DfaEmbeddingOracle, self).__init__(dfa.alphabet)
        self.dfa = dfa
        self.eye = np.eye(dfa.numStates)

    def initial(self):
        return self.eye[self.dfa.initial].copy()

    def step(self, vector, symbol):
        state = int(np.argmax(vector))
        return self.eye[self.dfa.transition(state, symbol)].copy()

    def classify(self, vector):
        return self.dfa.isAccepting(int(np.argmax(vector)))

    def isBounded(self):
        return True

    def getJsonableObject(self):
        return OrderedDict([("class", "DfaEmbeddingOracle"),
                            ("dfa", self.dfa.getJsonableObject())])


def embed_dfa_in_rnn(dfa, gain=20.0):
    """Second-order sigmoid recognizer that simulates ``dfa``.

    One hidden unit per state and one-hot symbol embeddings;
    W_ijk = gain when δ(j, k) = i, c = -gain/2, so a one-hot state maps
    to a near one-hot successor. The head gives +gain/2 to accepting
    units and -gain/2 to the others.
    """
    numStates = dfa.numStates
    numSymbols = len(dfa.alphabet)
    W = np.zeros((numStates, numStates, numSymbols))
    for j in range(numStates):
        for k in range(numSymbols):
            W[int(dfa.delta[j, k]), j, k] = gain
    h0 = np.zeros(numStates)
    h0[dfa.initial] = 1.0
    head = np.where(dfa.acceptingMask, gain/2.0, -gain/2.0)
    weights = OrderedDict([("B", np.eye(numSymbols)),
                           ("h0", h0),
                           ("W", W),
                           ("c", np.full(numStates, -gain/2.0)),
                           ("O", head[None, :]),
                           ("Ob", np.zeros(1))])
    return RnnModel(CellKind.create("second-order", "sigmoid"),
                    dfa.alphabet, numStates, weights, head=RECOGNIZER)


def as_oracle(source):
    """Oracle for a model, a DFA, or an existing oracle.
    """
    if isinstance(source, AbstractStateMachineOracle):
        return source
    if isinstance(source, RnnModel):
        return RnnOracle(source)
    from fsmx.automata.core import Dfa
    if isinstance(source, Dfa):
        return DfaEmbeddingOracle(source)
    raise ValueError("Cannot build an oracle from "+str(type(source)))
