from __future__ import absolute_import, division, print_function
from collections import OrderedDict
from fractions import Fraction
import os
import numpy as np
from fsmx.fsmxutil import util
from fsmx.automata.core import BINARY, as_alphabet
from fsmx.automata.weighted import Pfa
from fsmx.rnn.cells import CellKind
from fsmx.rnn.model import LM, zero_model
from fsmx.distances.finite import (level_values, string_at, check_guard,
                                   _first_argmax)

HALF = Fraction(1, 2)


def _check_epsilon(epsilon, upper=HALF):
    epsilon = Fraction(epsilon)
    if not 0 < epsilon < upper:
        raise ValueError("epsilon must lie in (0, "+str(upper)+"), got "
                         +str(epsilon))
    return epsilon


def _state_index(formula, clause, position, satisfied):
    """q0 is 0; q_{ij}^T and q_{ij}^F follow clause by clause."""
    return 1 + 2*(clause*formula.n + position) + (0 if satisfied else 1)


def _satisfied_by(clause, atom, bit):
    return any(abs(x) == atom and (x > 0) == bit for x in clause)


def sat_to_pfa(formula, epsilon):
    """PFA whose weight on a string of length n reflects how many
    clauses the string, read as an assignment, satisfies.

    One chain per clause with a satisfied (T) and an unsatisfied (F)
    state per position. From q0 the first bit enters each chain with
    weight (1/2 - ε)/k; a state moves F to T when the bit read satisfies
    a literal of the clause on that atom; chain edges weigh 1/2 - ε and
    chain states stop with weight 2ε. At the last position the T state
    stops with weight 1 - 2ε and moves to the F state with weight ε per
    symbol; the last F state loops with weight 1/2 - ε per symbol.

    Weights are exact rationals.
    """
    epsilon = _check_epsilon(epsilon)
    n, k = formula.n, formula.k
    numStates = 1 + 2*k*n
    zero = Fraction(0)
    transitions = OrderedDict((symbol, [[zero]*numStates
                                        for i in range(numStates)])
                              for symbol in BINARY)
    final = [2*epsilon]*numStates
    chainWeight = HALF - epsilon
    for symbol in BINARY:
        bit = symbol == "1"
        matrix = transitions[symbol]
        for i, clause in enumerate(formula.clauses):
            target = _state_index(formula, i, 0, _satisfied_by(clause, 1, bit))
            matrix[0][target] += chainWeight/k
            for j in range(n - 1):
                nextSatisfied = _satisfied_by(clause, j + 2, bit)
                matrix[_state_index(formula, i, j, True)][
                    _state_index(formula, i, j + 1, True)] += chainWeight
                matrix[_state_index(formula, i, j, False)][
                    _state_index(formula, i, j + 1, nextSatisfied)]\
                    += chainWeight
            lastTrue = _state_index(formula, i, n - 1, True)
            lastFalse = _state_index(formula, i, n - 1, False)
            matrix[lastTrue][lastFalse] += epsilon
            matrix[lastFalse][lastFalse] += chainWeight
    for i in range(k):
        final[_state_index(formula, i, n - 1, True)] = 1 - 2*epsilon
    alpha = [Fraction(1)] + [zero]*(numStates - 1)
    return Pfa(BINARY, alpha, transitions, final)


def closed_form(formula, epsilon, w):
    """Weight of ``w`` under :func:`sat_to_pfa` computed directly:

    - |w| < n: 2(1/2-ε)^|w| ε
    - |w| = n: 2(1/2-ε)^|w| ε [(N/k)(1-2ε)/(2ε) + (k-N)/k]
    - |w| > n: 2(1/2-ε)^|w| ε [(N/k) 2ε/(1-2ε) + (k-N)/k]

    with N the number of clauses the first n symbols satisfy.
    """
    epsilon = _check_epsilon(epsilon)
    length = len(BINARY.split(w))
    base = 2*(HALF - epsilon)**length*epsilon
    if length < formula.n:
        BINARY.encode(w)
        return base
    k = formula.k
    satisfied = formula.countSatisfied(w)
    if length == formula.n:
        factor = (1 - 2*epsilon)/(2*epsilon)
    else:
        factor = 2*epsilon/(1 - 2*epsilon)
    return base*(Fraction(satisfied, k)*factor + Fraction(k - satisfied, k))


def trivial_rnnlm(epsilon, alphabet=BINARY):
    """Language model with every weight zero but the output bias.

    The bias gives each ordinary symbol log2((1-2ε)/(2|Σ|ε)) and the end
    marker 0, so every step assigns 2ε to the end marker and
    (1-2ε)/|Σ| to each symbol; on the binary alphabet
    R(w) = 2(1/2-ε)^|w| ε.
    """
    epsilon = _check_epsilon(epsilon)
    alphabet = as_alphabet(alphabet)
    model = zero_model(CellKind.create("first-order", "relu"), alphabet,
                       dim=2, head=LM)
    weights = OrderedDict(model.weights)
    bias = np.log2(float((1 - 2*epsilon)/(2*len(alphabet)*epsilon)))
    weights["Ob"] = np.array([bias]*len(alphabet) + [0.0])
    return model.withWeights(weights)


def trivial_weight(epsilon, w, alphabet=BINARY):
    """Exact weight of ``w`` under :func:`trivial_rnnlm`."""
    epsilon = Fraction(epsilon)
    alphabet = as_alphabet(alphabet)
    length = len(alphabet.encode(w))
    return ((1 - 2*epsilon)/len(alphabet))**length*2*epsilon


class ReductionBundle(object):
    """A formula with the PFA and the RNN language model built from it,
    plus the threshold separating satisfiable from unsatisfiable.

    Arguments:
        formula: a :class:`.SatFormula`

        epsilon: rational in (0, 1/4)

        s: slack in [k-1, k); defaults to k - 1/2

    The threshold is c_ε = 2 (εs/k) (1/2-ε)^n (1-4ε)/(2ε). On strings
    of length n, |R(w) - A(w)| = 2(1/2-ε)^n ε (N/k)(1-4ε)/(2ε), which
    exceeds c_ε exactly when all k clauses are satisfied.
    """

    def __init__(self, formula, epsilon, s=None):
        self.formula = formula
        self.epsilon = _check_epsilon(epsilon, Fraction(1, 4))
        k = formula.k
        self.s = Fraction(k) - HALF if s is None else Fraction(s)
        if not k - 1 <= self.s < k:
            raise ValueError("s must lie in [k-1, k) = ["+str(k - 1)+", "
                             +str(k)+"), got "+str(self.s))
        eps = self.epsilon
        self.cEpsilon = (2*(eps*self.s/k)*(HALF - eps)**formula.n
                         *(1 - 4*eps)/(2*eps))
        self.pfa = sat_to_pfa(formula, eps)
        self.rnnlm = trivial_rnnlm(eps)

    def rnnWeight(self, w):
        return trivial_weight(self.epsilon, w)

    def pfaWeight(self, w):
        return self.pfa.weight(w)

    def maxGap(self, length=None):
        """Exact max over Σ^length of |R(w) - A(w)| (length defaults to
        n, where the maximum over all strings is attained).

        Returns:
            (gap, first maximizing string)
        """
        length = self.formula.n if length is None else length
        check_guard(BINARY, length)
        pfaLevel = list(level_values(self.pfa, length))[-1]
        rnnValue = trivial_weight(self.epsilon, "0"*length)
        gaps = np.array([abs(rnnValue - x) for x in pfaLevel], dtype=object)
        idx = _first_argmax(gaps)
        return gaps[idx], string_at(BINARY, length, idx)

    def decide(self):
        return self.maxGap()[0] > self.cEpsilon

    def getJsonableObject(self):
        return OrderedDict([("formula", self.formula.getJsonableObject()),
                            ("epsilon", util.format_weight(self.epsilon)),
                            ("s", util.format_weight(self.s)),
                            ("c_eps", util.format_weight(self.cEpsilon)),
                            ("c_eps_float", float(self.cEpsilon))])

    def write(self, directory):
        """Write pfa.json, rnn.json and meta.json into ``directory``."""
        if not os.path.isdir(directory):
            os.makedirs(directory)
        util.write_json(os.path.join(directory, "pfa.json"),
                        self.pfa.getJsonableObject())
        util.write_json(os.path.join(directory, "rnn.json"),
                        self.rnnlm.getJsonableObject())
        util.write_json(os.path.join(directory, "meta.json"),
                        self.getJsonableObject())


def reduction_bundle(formula, epsilon, s=None):
    return ReductionBundle(formula, epsilon, s)


def decide_sat(formula, epsilon, s=None):
    """Satisfiability of ``formula`` read off d∞(R, A) > c_ε, with the
    distance computed exactly over Σ^n.
    """
    return reduction_bundle(formula, epsilon, s).decide()
