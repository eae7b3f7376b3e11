from __future__ import absolute_import, division, print_function
from collections import OrderedDict
from fractions import Fraction
import numpy as np
from scipy.special import expit
from fsmx.fsmxutil import util
from fsmx.automata.core import Alphabet, as_alphabet, BINARY
from fsmx.rnn.cells import CellKind

RECOGNIZER = "recognizer"
LM = "lm"
HEADS = (RECOGNIZER, LM)


class RnnModel(object):
    """Recurrent network with a recognizer or language-model head.

    Weights live in an ordered dict of read-only float64 arrays:

    - ``B``: embeddings, one row per input symbol (Σ for recognizers,
      Σ followed by the end marker for language models)
    - ``h0``: initial hidden vector (LSTM cell state starts at zero)
    - the cell parameters, see ``CellKind.parameterShapes``
    - ``O``, ``Ob``: head matrix and bias; one row for recognizers,
      one row per symbol of Σ_$ for language models

    Arguments:
        kind: a :class:`.CellKind`

        alphabet: an :class:`.Alphabet` or list of symbols

        dim: hidden size

        weights: dict name -> array

        head: ``"recognizer"`` or ``"lm"``
    """

    def __init__(self, kind, alphabet, dim, weights, head=RECOGNIZER):
        if head not in HEADS:
            raise ValueError("head must be one of "+str(HEADS))
        self.kind = kind
        self.alphabet = as_alphabet(alphabet)
        self.dim = int(dim)
        self.head = head
        self.weights = OrderedDict()
        for name, val in weights.items():
            arr = np.array(val, dtype=float)
            arr.setflags(write=False)
            self.weights[name] = arr
        self._checkShapes()
        self.inputIndex = dict((x, i) for (i, x)
                               in enumerate(self.inputSymbols))

    @property
    def inputSymbols(self):
        if self.head == LM:
            return self.alphabet.withEndMarker()
        return self.alphabet.symbols

    @property
    def embeddingDim(self):
        return self.weights["B"].shape[1]

    @property
    def stateSize(self):
        return self.kind.stateSize(self.dim)

    def expectedShapes(self, embeddingDim=None):
        if embeddingDim is None:
            embeddingDim = self.weights["B"].shape[1]\
                if "B" in self.weights else\
                self.kind.defaultEmbeddingDim(self.dim,
                                              len(self.inputSymbols))
        outDim = len(self.inputSymbols) if self.head == LM else 1
        return expected_shapes(self.kind, self.dim, len(self.inputSymbols),
                               embeddingDim, outDim)

    def _checkShapes(self):
        expected = self.expectedShapes()
        for name, shape in expected.items():
            if name not in self.weights:
                raise util.ShapeMismatchError("Missing weight "+name)
            if self.weights[name].shape != shape:
                raise util.ShapeMismatchError(
                    "Weight "+name+" has shape "
                    +str(self.weights[name].shape)+", expected "+str(shape))
        extra = [x for x in self.weights if x not in expected]
        if len(extra) > 0:
            raise util.ShapeMismatchError("Unexpected weights "+str(extra))

    def withWeights(self, weights):
        return RnnModel(self.kind, self.alphabet, self.dim, weights,
                        head=self.head)

    def initialState(self):
        state = np.zeros(self.stateSize)
        state[:self.dim] = self.weights["h0"]
        return state

    def symbolIndex(self, symbol):
        if symbol not in self.inputIndex:
            raise util.RejectedInputError(
                "Symbol "+repr(symbol)+" not accepted by this model")
        return self.inputIndex[symbol]

    def stepBatch(self, states, symbolIndices):
        """Advance a batch of states by one symbol each.
        """
        inputs = self.weights["B"][symbolIndices]
        return self.kind.forward(self.weights, states, inputs)[0]

    def step(self, state, symbol):
        state = np.asarray(state, dtype=float)
        if state.shape != (self.stateSize,):
            raise util.ShapeMismatchError(
                "State has shape "+str(state.shape)+", expected "
                +str((self.stateSize,)))
        return self.stepBatch(state[None, :],
                              [self.symbolIndex(symbol)])[0]

    def run(self, w, state=None):
        state = self.initialState() if state is None else state
        for symbol in self.alphabet.split(w):
            state = self.step(state, symbol)
        return state

    def hidden(self, state):
        return self.kind.hiddenPart(state, self.dim)

    def logits(self, state):
        return self.weights["O"].dot(self.hidden(state)) + self.weights["Ob"]

    def confidence(self, state):
        if self.head != RECOGNIZER:
            raise util.UnsupportedModelError(
                "Classification needs a recognizer head")
        return float(expit(self.logits(state)[0]))

    def accepts(self, state):
        return self.confidence(state) > 0.5

    def getJsonableObject(self):
        return OrderedDict([
            ("kind", self.kind.variant),
            ("activation", self.kind.activation),
            ("dim", self.dim),
            ("alphabet", self.alphabet.getJsonableObject()),
            ("weights", OrderedDict(
                (name, util.format_weight_array(val))
                for (name, val) in self.weights.items())),
            ("head", self.head)])

    @classmethod
    def fromJsonable(cls, obj):
        weights = OrderedDict((name, util.parse_weight_array(val))
                              for (name, val) in obj["weights"].items())
        return cls(kind=CellKind.create(obj["kind"], obj["activation"]),
                   alphabet=Alphabet.fromJsonable(obj["alphabet"]),
                   dim=obj["dim"], weights=weights, head=obj["head"])

    def __eq__(self, other):
        return (isinstance(other, RnnModel) and self.kind == other.kind
                and self.alphabet == other.alphabet and self.dim == other.dim
                and self.head == other.head
                and list(self.weights) == list(other.weights)
                and all(np.array_equal(self.weights[x], other.weights[x])
                        for x in self.weights))

    def __ne__(self, other):
        return not self.__eq__(other)


def expected_shapes(kind, dim, numInputs, embeddingDim, outDim):
    shapes = OrderedDict([("B", (numInputs, embeddingDim)), ("h0", (dim,))])
    shapes.update(kind.parameterShapes(dim, embeddingDim))
    shapes["O"] = (outDim, dim)
    shapes["Ob"] = (outDim,)
    return shapes


def build_model(kind, alphabet=BINARY, dim=20, head=RECOGNIZER,
                randomState=None, std=0.1, embeddingDim=None):
    """Randomly initialized model: N(0, std^2) for every weight, except
    one-hot embeddings for cells whose embeddings default to one-hot.
    """
    if isinstance(kind, str):
        kind = CellKind.create(kind)
    alphabet = as_alphabet(alphabet)
    if randomState is None:
        from fsmx import random as randomState
    numInputs = len(alphabet) + (1 if head == LM else 0)
    if embeddingDim is None:
        embeddingDim = kind.defaultEmbeddingDim(dim, numInputs)
    outDim = numInputs if head == LM else 1
    weights = OrderedDict()
    for name, shape in expected_shapes(kind, dim, numInputs,
                                       embeddingDim, outDim).items():
        weights[name] = randomState.normal(0.0, std, size=shape)
    if embeddingDim == numInputs and kind.variant != "first-order":
        weights["B"] = np.eye(numInputs)
    return RnnModel(kind, alphabet, dim, weights, head=head)


def zero_model(kind, alphabet=BINARY, dim=2, head=RECOGNIZER,
               embeddingDim=None):
    """Model whose weights are all zero (embeddings included).
    """
    if isinstance(kind, str):
        kind = CellKind.create(kind)
    alphabet = as_alphabet(alphabet)
    numInputs = len(alphabet) + (1 if head == LM else 0)
    if embeddingDim is None:
        embeddingDim = kind.defaultEmbeddingDim(dim, numInputs)
    outDim = numInputs if head == LM else 1
    weights = OrderedDict(
        (name, np.zeros(shape)) for (name, shape)
        in expected_shapes(kind, dim, numInputs, embeddingDim,
                           outDim).items())
    return RnnModel(kind, alphabet, dim, weights, head=head)


def step(model, h, symbol):
    """One cell update; pure.
    """
    return model.step(h, symbol)


def recognizer_classify(model, w):
    """Fold ``step`` over ``w`` and apply the sigmoid head.

    Returns:
        (accepted, confidence); a confidence of exactly 0.5 rejects
    """
    if model.head != RECOGNIZER:
        raise util.UnsupportedModelError(
            "recognizer_classify needs a recognizer head")
    conf = model.confidence(model.run(w))
    return conf > 0.5, conf


def softmax2(x):
    """softmax2(x)_i = 2^{x_i} / Σ_j 2^{x_j}
    """
    x = np.asarray(x, dtype=float)
    shifted = np.exp2(x - x.max(axis=-1, keepdims=True))
    return shifted/shifted.sum(axis=-1, keepdims=True)


def lm_weight(model, w):
    """R(w): product of the next-symbol probabilities.

    The end marker is fed first; after each consumed symbol the head
    gives softmax2(O h + O') over Σ_$, and the factor taken is the
    probability of the next symbol of w, then of the end marker, for
    |w|+1 factors in all.
    """
    if model.head != LM:
        raise util.UnsupportedModelError("lm_weight needs an lm head")
    endIdx = len(model.alphabet)
    state = model.step(model.initialState(), model.alphabet.endMarker)
    weight = 1.0
    for symbol in model.alphabet.split(w):
        idx = model.symbolIndex(symbol)
        if idx == endIdx:
            raise util.RejectedInputError("End marker inside a string")
        weight *= softmax2(model.logits(state))[idx]
        state = model.step(state, symbol)
    return weight*softmax2(model.logits(state))[endIdx]


def enc4(w):
    """Σ_i w_i / 4^i as an exact rational.
    """
    total = Fraction(0)
    scale = Fraction(1)
    for symbol in w:
        scale /= 4
        if symbol not in ("0", "1", 0, 1):
            raise util.RejectedInputError("enc4 takes binary strings, got "
                                          +repr(symbol))
        if symbol in ("1", 1):
            total += scale
    return total


def read_model_file(fileName):
    return RnnModel.fromJsonable(util.read_json(fileName))


def write_model_file(fileName, model):
    util.write_json(fileName, model.getJsonableObject())
