from __future__ import absolute_import, division, print_function
from collections import OrderedDict
import numpy as np
from scipy.special import expit


def relu(x):
    return np.maximum(x, 0.0)


#activation name -> (function, derivative expressed in terms of the output)
ACTIVATIONS = OrderedDict([
    ("sigmoid", (expit, lambda y: y*(1.0 - y))),
    ("tanh", (np.tanh, lambda y: 1.0 - y*y)),
    ("relu", (relu, lambda y: (y > 0).astype(float)))])


class CellKind(object):
    """A recurrent cell: its variant, activation and update equations.

    Cells are stateless; they act on a parameter dict and on batches of
    states (``batch x stateSize``) and inputs (``batch x embeddingDim``).
    ``forward`` returns the new states and a cache that ``backward``
    consumes to produce gradients.

    Arguments:
        activation: one of ``ACTIVATIONS``; LSTM and GRU cells fix
    their own activations and ignore it.
    """
    variant = None

    def __init__(self, activation=None):
        if activation is not None and activation not in ACTIVATIONS:
            raise ValueError("Unknown activation "+str(activation)
                             +"; choose from "+str(list(ACTIVATIONS)))
        self.activation = activation

    @staticmethod
    def create(variant, activation=None):
        if variant not in CELL_VARIANTS:
            raise ValueError("Unknown cell variant "+str(variant)
                             +"; choose from "+str(list(CELL_VARIANTS)))
        return CELL_VARIANTS[variant](activation)

    @property
    def name(self):
        if self.activation is None:
            return self.variant
        return self.variant+"-"+self.activation

    def __eq__(self, other):
        return (isinstance(other, CellKind) and self.variant == other.variant
                and self.activation == other.activation)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash((self.variant, self.activation))

    def __repr__(self):
        return "CellKind("+self.name+")"

    def defaultEmbeddingDim(self, dim, numInputs):
        """One-hot embeddings by default."""
        return numInputs

    def stateSize(self, dim):
        return dim

    def hiddenPart(self, states, dim):
        return states[..., :dim]

    def isBounded(self):
        """True if hidden values live in a compact box."""
        return self.activation != "relu"

    def hiddenRange(self):
        """(low, high) of the hidden values."""
        if self.activation == "sigmoid":
            return (0.0, 1.0)
        return (-1.0, 1.0)

    def parameterShapes(self, dim, embeddingDim):
        raise NotImplementedError()

    def forward(self, params, states, inputs):
        raise NotImplementedError()

    def backward(self, params, cache, dNewStates, grads):
        """Accumulate parameter gradients into ``grads``.

        Returns:
            (gradient w.r.t. the previous states, gradient w.r.t. inputs)
        """
        raise NotImplementedError()

    def getJsonableObject(self):
        return OrderedDict([("variant", self.variant),
                            ("activation", self.activation)])


class FirstOrderCell(CellKind):
    """q' = φ(W q + b_σ + c); embeddings have the hidden dimension.
    """
    variant = "first-order"

    def __init__(self, activation="sigmoid"):
        super(FirstOrderCell, self).__init__(
            "sigmoid" if activation is None else activation)
        self.phi, self.dphi = ACTIVATIONS[self.activation]

    def defaultEmbeddingDim(self, dim, numInputs):
        return dim

    def parameterShapes(self, dim, embeddingDim):
        assert embeddingDim == dim, "first-order embeddings have size dim"
        return OrderedDict([("W", (dim, dim)), ("c", (dim,))])

    def forward(self, params, states, inputs):
        out = self.phi(states.dot(params["W"].T) + inputs + params["c"])
        return out, (states, out)

    def backward(self, params, cache, dNewStates, grads):
        states, out = cache
        da = dNewStates*self.dphi(out)
        grads["W"] += da.T.dot(states)
        grads["c"] += da.sum(axis=0)
        return da.dot(params["W"]), da


class SecondOrderCell(CellKind):
    """q'_i = φ(Σ_jk W_ijk q_j b_σ,k + c_i).
    """
    variant = "second-order"

    def __init__(self, activation="sigmoid"):
        super(SecondOrderCell, self).__init__(
            "sigmoid" if activation is None else activation)
        self.phi, self.dphi = ACTIVATIONS[self.activation]

    def parameterShapes(self, dim, embeddingDim):
        return OrderedDict([("W", (dim, dim, embeddingDim)), ("c", (dim,))])

    def forward(self, params, states, inputs):
        pre = np.einsum('ijk,bj,bk->bi', params["W"], states, inputs)
        out = self.phi(pre + params["c"])
        return out, (states, inputs, out)

    def backward(self, params, cache, dNewStates, grads):
        states, inputs, out = cache
        da = dNewStates*self.dphi(out)
        grads["W"] += np.einsum('bi,bj,bk->ijk', da, states, inputs)
        grads["c"] += da.sum(axis=0)
        dStates = np.einsum('ijk,bi,bk->bj', params["W"], da, inputs)
        dInputs = np.einsum('ijk,bi,bj->bk', params["W"], da, states)
        return dStates, dInputs


def _gate(params, name, states, inputs, fn):
    return fn(states.dot(params["W"+name].T) + inputs.dot(params["U"+name].T)
              + params["b"+name])


def _gateBackward(params, name, dPre, states, inputs, grads):
    grads["W"+name] += dPre.T.dot(states)
    grads["U"+name] += dPre.T.dot(inputs)
    grads["b"+name] += dPre.sum(axis=0)
    return dPre.dot(params["W"+name]), dPre.dot(params["U"+name])


class LstmCell(CellKind):
    """Standard LSTM; the state vector is the concatenation [h, c].

    i, f, o = sigmoid(W_x h + U_x b_σ + b_x)
    c' = f*c + i*tanh(W_c h + U_c b_σ + b_c)
    h' = o*tanh(c')
    """
    variant = "lstm"

    def __init__(self, activation=None):
        super(LstmCell, self).__init__(None)

    def stateSize(self, dim):
        return 2*dim

    def parameterShapes(self, dim, embeddingDim):
        shapes = OrderedDict()
        for name in "ifoc":
            shapes["W"+name] = (dim, dim)
            shapes["U"+name] = (dim, embeddingDim)
            shapes["b"+name] = (dim,)
        return shapes

    def forward(self, params, states, inputs):
        dim = states.shape[1]//2
        h, c = states[:, :dim], states[:, dim:]
        i = _gate(params, "i", h, inputs, expit)
        f = _gate(params, "f", h, inputs, expit)
        o = _gate(params, "o", h, inputs, expit)
        g = _gate(params, "c", h, inputs, np.tanh)
        newC = f*c + i*g
        tanhC = np.tanh(newC)
        newH = o*tanhC
        cache = (h, c, inputs, i, f, o, g, tanhC)
        return np.concatenate([newH, newC], axis=1), cache

    def backward(self, params, cache, dNewStates, grads):
        h, c, inputs, i, f, o, g, tanhC = cache
        dim = h.shape[1]
        dH, dC = dNewStates[:, :dim], dNewStates[:, dim:]
        dC = dC + dH*o*(1.0 - tanhC*tanhC)
        dStates = np.zeros_like(h)
        dInputs = np.zeros_like(inputs)
        for name, dPre in [("o", dH*tanhC*o*(1.0 - o)),
                           ("f", dC*c*f*(1.0 - f)),
                           ("i", dC*g*i*(1.0 - i)),
                           ("c", dC*i*(1.0 - g*g))]:
            dh, dx = _gateBackward(params, name, dPre, h, inputs, grads)
            dStates += dh
            dInputs += dx
        return np.concatenate([dStates, dC*f], axis=1), dInputs


class GruCell(CellKind):
    """Standard GRU.

    z, r = sigmoid(W_x h + U_x b_σ + b_x)
    h' = (1-z)*tanh(W_h (h*r) + U_h b_σ + b_h) + z*h
    """
    variant = "gru"

    def __init__(self, activation=None):
        super(GruCell, self).__init__(None)

    def parameterShapes(self, dim, embeddingDim):
        shapes = OrderedDict()
        for name in "zrh":
            shapes["W"+name] = (dim, dim)
            shapes["U"+name] = (dim, embeddingDim)
            shapes["b"+name] = (dim,)
        return shapes

    def forward(self, params, states, inputs):
        z = _gate(params, "z", states, inputs, expit)
        r = _gate(params, "r", states, inputs, expit)
        resetStates = states*r
        g = _gate(params, "h", resetStates, inputs, np.tanh)
        out = (1.0 - z)*g + z*states
        return out, (states, inputs, z, r, resetStates, g)

    def backward(self, params, cache, dNewStates, grads):
        states, inputs, z, r, resetStates, g = cache
        dStates = dNewStates*z
        dG = dNewStates*(1.0 - z)
        dZ = dNewStates*(states - g)
        dResetStates, dInputs = _gateBackward(
            params, "h", dG*(1.0 - g*g), resetStates, inputs, grads)
        dStates += dResetStates*r
        dR = dResetStates*states
        for name, dPre in [("z", dZ*z*(1.0 - z)), ("r", dR*r*(1.0 - r))]:
            dh, dx = _gateBackward(params, name, dPre, states, inputs, grads)
            dStates += dh
            dInputs += dx
        return dStates, dInputs


CELL_VARIANTS = OrderedDict([
    (FirstOrderCell.variant, FirstOrderCell),
    (SecondOrderCell.variant, SecondOrderCell),
    (LstmCell.variant, LstmCell),
    (GruCell.variant, GruCell)])
