from __future__ import absolute_import, division, print_function
from collections import OrderedDict
from fractions import Fraction
import itertools
import numpy as np
import scipy.linalg
from fsmx.fsmxutil import util
from fsmx.automata.core import Alphabet, as_alphabet

STOCHASTIC_TOLERANCE = 1e-9


def _is_exact(values):
    return any(isinstance(x, Fraction) for x in values)


def _as_weight_array(arr, exact):
    if exact:
        arr = np.array(arr, dtype=object)
        return np.vectorize(Fraction, otypes=[object])(arr)
    return np.array(arr, dtype=float)


class Wfa(object):
    """Weighted finite automaton over the standard real semiring.

    If any weight is a ``Fraction`` all weights are kept as exact
    rationals (object arrays) and evaluation is exact; otherwise
    float64 arrays are used.

    Arguments:
        alphabet: an :class:`.Alphabet` or a list of symbols

        alpha: initial vector of length n

        transitions: dict symbol -> n x n matrix A_symbol

        beta: output vector of length n
    """

    def __init__(self, alphabet, alpha, transitions, beta):
        self.alphabet = as_alphabet(alphabet)
        missing = [x for x in self.alphabet if x not in transitions]
        if len(missing) > 0:
            raise ValueError("No transition matrix for symbols "
                             +str(missing))
        rawValues = list(np.asarray(alpha, dtype=object).ravel())\
            + list(np.asarray(beta, dtype=object).ravel())
        for symbol in self.alphabet:
            rawValues.extend(np.asarray(transitions[symbol],
                                        dtype=object).ravel())
        self.exact = _is_exact(rawValues)
        conv = lambda arr: _as_weight_array(arr, self.exact)
        self.alpha = conv(alpha)
        self.beta = conv(beta)
        dim = len(self.alpha)
        if self.alpha.ndim != 1 or self.beta.shape != (dim,):
            raise util.ShapeMismatchError(
                "alpha and beta must be vectors of the same length")
        self.transitions = OrderedDict()
        for symbol in self.alphabet:
            matrix = conv(transitions[symbol])
            if matrix.shape != (dim, dim):
                raise util.ShapeMismatchError(
                    "Matrix for "+symbol+" has shape "+str(matrix.shape)
                    +", expected "+str((dim, dim)))
            matrix.setflags(write=False)
            self.transitions[symbol] = matrix
        self.alpha.setflags(write=False)
        self.beta.setflags(write=False)
        self.matrices = [self.transitions[x] for x in self.alphabet]
        # nonzero entries per symbol for the exact (sparse) path
        self._sparse = None
        if self.exact:
            self._sparse = []
            for matrix in self.matrices:
                rows = [[(j, matrix[i, j]) for j in range(dim)
                         if matrix[i, j] != 0] for i in range(dim)]
                self._sparse.append(rows)

    @property
    def dim(self):
        return len(self.alpha)

    def __len__(self):
        return self.dim

    def outputVector(self):
        return self.beta

    def initialForward(self):
        if self.exact:
            return dict((i, x) for (i, x) in enumerate(self.alpha) if x != 0)
        return self.alpha.copy()

    def forwardStep(self, forward, symbolIdx):
        """One row-vector/matrix product αᵀA... on the current forward
        vector (a dict of nonzeros on the exact path).
        """
        if self.exact:
            result = {}
            rows = self._sparse[symbolIdx]
            for (i, val) in forward.items():
                for (j, weight) in rows[i]:
                    result[j] = result.get(j, 0) + val*weight
            return dict((j, x) for (j, x) in result.items() if x != 0)
        return forward.dot(self.matrices[symbolIdx])

    def readout(self, forward, vector=None):
        vector = self.outputVector() if vector is None else vector
        if self.exact:
            return sum((val*vector[i] for (i, val) in forward.items()),
                       Fraction(0))
        return float(forward.dot(vector))

    def forward(self, w):
        forward = self.initialForward()
        for idx in self.alphabet.encode(w):
            forward = self.forwardStep(forward, idx)
        return forward

    def weight(self, w):
        return self.readout(self.forward(w))

    def __call__(self, w):
        return self.weight(w)

    def levelWeights(self, maxLength):
        """Weights of every string, one array per length, in
        length-lexicographic order (float path only). Endless when
        ``maxLength`` is None.
        """
        assert not self.exact
        stacked = np.stack(self.matrices)
        forwardLevel = self.alpha[None, :]
        lengths = itertools.count() if maxLength is None\
            else range(maxLength+1)
        for length in lengths:
            yield forwardLevel.dot(self.outputVector())
            if maxLength is None or length < maxLength:
                forwardLevel = np.einsum('wn,snm->wsm', forwardLevel,
                                         stacked).reshape(-1, self.dim)

    def scaled(self, factor):
        """Plain WFA computing ``factor`` times this automaton's weight.
        """
        return Wfa(self.alphabet, self.alpha*factor,
                   self.transitions, self.beta)

    def _jsonableFields(self):
        return [("alphabet", self.alphabet.getJsonableObject()),
                ("dim", self.dim),
                ("exact", self.exact),
                ("alpha", util.format_weight_array(self.alpha))]

    def _jsonableTransitions(self):
        return OrderedDict((symbol, util.format_weight_array(matrix))
                           for (symbol, matrix)
                           in self.transitions.items())

    def getJsonableObject(self):
        return OrderedDict(self._jsonableFields()
                           + [("beta", util.format_weight_array(self.beta)),
                              ("trans", self._jsonableTransitions())])

    @staticmethod
    def _parseFields(obj):
        exact = obj.get("exact")
        if exact is None:
            # older files: rationals are written as "p/q"
            exact = any("/" in str(x) for x in _flatten(obj["alpha"]))\
                or any("/" in str(x)
                       for x in _flatten(list(obj["trans"].values())))
        alphabet = Alphabet.fromJsonable(obj["alphabet"])
        alpha = util.parse_weight_array(obj["alpha"], exact=exact)
        transitions = dict((symbol, util.parse_weight_array(matrix,
                                                            exact=exact))
                           for (symbol, matrix) in obj["trans"].items())
        if len(alpha) != obj["dim"]:
            raise ValueError("dim field disagrees with alpha")
        return alphabet, alpha, transitions, exact

    @classmethod
    def fromJsonable(cls, obj):
        alphabet, alpha, transitions, exact = cls._parseFields(obj)
        return cls(alphabet, alpha, transitions,
                   util.parse_weight_array(obj["beta"], exact=exact))


def _flatten(nested):
    if isinstance(nested, list):
        for x in nested:
            for y in _flatten(x):
                yield y
    else:
        yield nested


class ValidationReport(object):
    """Outcome of :func:`pfa_validate`; truthy iff no violation.
    """

    def __init__(self, violation=None):
        self.violation = violation

    @property
    def ok(self):
        return self.violation is None

    def __bool__(self):
        return self.ok

    __nonzero__ = __bool__

    def __repr__(self):
        return ("ok" if self.ok else "violation: "+self.violation)


class Pfa(Wfa):
    """Probabilistic finite automaton.

    The output vector is the vector of final (stopping) probabilities.
    Validity is checked by :func:`pfa_validate`, not at construction.

    Arguments:
        final: final-state weights P

        deterministic: flag for DPFAs (at most one successor per
    state and symbol)

        See superclass for the rest.
    """

    def __init__(self, alphabet, alpha, transitions, final,
                 deterministic=False):
        super(Pfa, self).__init__(alphabet, alpha, transitions, final)
        self.deterministic = deterministic
        self._termination = None

    @property
    def final(self):
        return self.beta

    def validate(self, tolerance=STOCHASTIC_TOLERANCE):
        """See :func:`pfa_validate`.
        """
        one = Fraction(1) if self.exact else 1.0
        if any(x < -tolerance for x in self.alpha):
            return ValidationReport("negative initial weight")
        if abs(sum(self.alpha) - one) > tolerance:
            return ValidationReport("initial mass "+str(float(sum(self.alpha)))
                                    +" differs from 1")
        for i in range(self.dim):
            if self.final[i] < -tolerance:
                return ValidationReport("row "+str(i)
                                        +": negative final weight")
            outgoing = self.final[i]
            for symbol, matrix in self.transitions.items():
                row = matrix[i]
                if any(x < -tolerance for x in row):
                    return ValidationReport(
                        "row "+str(i)+": negative transition weight on "
                        +symbol)
                if self.deterministic\
                        and sum(1 for x in row if x != 0) > 1:
                    return ValidationReport(
                        "row "+str(i)+": more than one successor on "
                        +symbol+" in a deterministic PFA")
                outgoing = outgoing + sum(row)
            if abs(outgoing - one) > tolerance:
                return ValidationReport(
                    "row "+str(i)+": outgoing plus final mass "
                    +str(float(outgoing))+" differs from 1")
        return ValidationReport()

    def mass(self, maxLength):
        """See :func:`pfa_mass`.
        """
        stepMatrix = sum(self.matrices[1:], self.matrices[0])
        forward = self.alpha
        total = forward.dot(self.final)
        for length in range(maxLength):
            forward = forward.dot(stepMatrix)
            total = total + forward.dot(self.final)
        return total

    def terminationVector(self):
        """Vector s with s_i the probability of eventually stopping when
        in state i; solves (I - Σ_σ A_σ) s = P.
        """
        if self._termination is None:
            stepMatrix = np.array(sum(self.matrices[1:], self.matrices[0]),
                                  dtype=float)
            lhs = np.eye(self.dim) - stepMatrix
            try:
                self._termination = scipy.linalg.solve(
                    lhs, np.array(self.final, dtype=float))
            except (np.linalg.LinAlgError, scipy.linalg.LinAlgError):
                # some states never stop; fall back to least squares
                self._termination = scipy.linalg.lstsq(
                    lhs, np.array(self.final, dtype=float))[0]
        return self._termination

    def prefixWeight(self, w):
        """Probability mass of all strings starting with ``w``.
        """
        forward = self.forward(w)
        if self.exact:
            return sum(float(val)*self.terminationVector()[i]
                       for (i, val) in forward.items())
        return float(forward.dot(self.terminationVector()))

    def tailRate(self):
        """Constant c with P(|x| >= t) <= exp(-c t), from the smallest
        stopping probability; 0 if some state never stops.
        """
        minStop = float(min(self.final))
        if minStop <= 0:
            return 0.0
        if minStop >= 1:
            return float("inf")
        return -np.log(1.0 - minStop)

    def getJsonableObject(self):
        return OrderedDict(self._jsonableFields()
                           + [("final", util.format_weight_array(self.final)),
                              ("trans", self._jsonableTransitions()),
                              ("deterministic", self.deterministic)])

    @classmethod
    def fromJsonable(cls, obj):
        alphabet, alpha, transitions, exact = cls._parseFields(obj)
        return cls(alphabet, alpha, transitions,
                   util.parse_weight_array(obj["final"], exact=exact),
                   deterministic=obj.get("deterministic", False))


def wfa_weight(m, w):
    """αᵀ A_{w1} ... A_{wn} β (final vector P for a :class:`.Pfa`).
    """
    return m.weight(w)


def pfa_validate(m, tolerance=STOCHASTIC_TOLERANCE):
    """Check every PFA constraint.

    Initial weights are nonnegative and sum to 1; for every state the
    transition weights over all symbols plus the final weight sum to
    1; DPFAs have at most one successor per (state, symbol).

    Returns:
        a :class:`.ValidationReport` naming the first violation
    """
    return m.validate(tolerance)


def pfa_mass(m, maxLength):
    """Σ_{|w| <= maxLength} m(w), by iterating the forward vector
    through Σ_σ A_σ.
    """
    return m.mass(maxLength)


def halving_dpfa(symbol="a", stop=Fraction(1, 2)):
    """Single-state DPFA with I = 1, T(q, symbol, q) = 1 - stop and
    P(q) = stop; on a unary alphabet a^n has weight (1-stop)^n stop.
    """
    stop = Fraction(stop)
    return Pfa(Alphabet([symbol]), [Fraction(1)],
               {symbol: [[1 - stop]]}, [stop], deterministic=True)


def random_dpfa(numStates, alphabet, randomState, minStop=0.2):
    """Random valid DPFA; every state stops with probability at least
    ``minStop``, so string lengths have a sub-exponential tail.
    """
    alphabet = as_alphabet(alphabet)
    assert 0 < minStop < 1
    transitions = dict((x, np.zeros((numStates, numStates)))
                       for x in alphabet)
    final = np.zeros(numStates)
    for state in range(numStates):
        stop = minStop + (1 - minStop)*randomState.rand()*0.5
        shares = randomState.dirichlet(np.ones(len(alphabet)))
        final[state] = stop
        for (symbol, share) in zip(alphabet, shares):
            target = randomState.randint(numStates)
            transitions[symbol][state, target] = (1 - stop)*share
    alpha = np.zeros(numStates)
    alpha[0] = 1.0
    return Pfa(alphabet, alpha, transitions, final, deterministic=True)


def read_pfa_file(fileName):
    obj = util.read_json(fileName)
    if "final" in obj:
        return Pfa.fromJsonable(obj)
    return Wfa.fromJsonable(obj)


def write_pfa_file(fileName, m):
    util.write_json(fileName, m.getJsonableObject())
