from __future__ import absolute_import, division, print_function
from collections import OrderedDict
import math
import numpy as np
import fsmx
from fsmx.fsmxutil import util
from fsmx.automata.core import Dfa, BINARY, as_alphabet, dfa_minimize,\
    random_minimal_dfa
from fsmx.learning.rpni import rpni, majority_labels

#largest count of transition tables searched exhaustively for one size
ENUMERATION_LIMIT = 10**6
TABLE_CHUNK = 4096

EXHAUSTIVE = "exhaustive"
RPNI = "rpni"


class LearnerConfig(object):
    """Settings of the sample-based learners.

    Arguments:
        C: constant in front of the complexity penalty

        delta: confidence parameter in (0, 1)

        epsilon: accuracy parameter in (0, 1)

        sizeCap: largest DFA size searched

        enumerationLimit: largest count of transition tables searched
    exhaustively for a size; larger sizes fall back to RPNI

        seed: random seed
    """

    def __init__(self, C=1.0, delta=0.05, epsilon=0.1, sizeCap=4,
                 enumerationLimit=ENUMERATION_LIMIT, seed=fsmx.DEFAULT_SEED):
        if C <= 0:
            raise ValueError("C must be positive")
        if not 0 < delta < 1 or not 0 < epsilon < 1:
            raise ValueError("delta and epsilon must lie in (0, 1)")
        if sizeCap < 1:
            raise ValueError("sizeCap must be at least 1")
        self.C = C
        self.delta = delta
        self.epsilon = epsilon
        self.sizeCap = sizeCap
        self.enumerationLimit = enumerationLimit
        self.seed = seed

    def getJsonableObject(self):
        return OrderedDict([("C", self.C), ("delta", self.delta),
                            ("epsilon", self.epsilon),
                            ("sizeCap", self.sizeCap),
                            ("enumerationLimit", self.enumerationLimit),
                            ("seed", self.seed)])

    @classmethod
    def fromJsonable(cls, obj):
        return cls(**obj)


class SrmResult(object):
    """Outcome of :func:`learn_srm`.

    Arguments:
        dfa: the selected (minimized) :class:`.Dfa`

        empiricalRisk: L_S of ``dfa``

        penalty: complexity penalty of ``dfa``

        trace: list of OrderedDicts, the best candidate of each size
    searched
    """

    def __init__(self, dfa, empiricalRisk, penalty, trace, m):
        self.dfa = dfa
        self.empiricalRisk = empiricalRisk
        self.penalty = penalty
        self.trace = trace
        self.m = m

    @property
    def objective(self):
        return self.empiricalRisk + self.penalty

    def getJsonableObject(self):
        return OrderedDict([("dfa", self.dfa.getJsonableObject()),
                            ("m", self.m),
                            ("L_S", self.empiricalRisk),
                            ("penalty", self.penalty),
                            ("objective", self.objective),
                            ("trace", self.trace)])


def srm_penalty(numSymbols, numStates, m, C=1.0):
    """C sqrt(|Σ| n (ln n + 1) / m)."""
    return C*math.sqrt(numSymbols*numStates*(math.log(numStates) + 1)/m)


def empirical_risk(dfa, sample):
    """Fraction of sample items ``dfa`` misclassifies."""
    items = list(sample)
    if len(items) == 0:
        raise ValueError("Empty sample")
    errors = sum(1 for (w, label) in items if dfa.run(w) != label)
    return errors/len(items)


def srm_objective(dfa, sample, C=1.0):
    """L_S(dfa) + C sqrt(|Σ| |dfa| (ln |dfa| + 1) / m)."""
    return (empirical_risk(dfa, sample)
            + srm_penalty(len(dfa.alphabet), dfa.numStates, len(sample), C))


def generalization_bound(m, n, delta, numSymbols, C=1.0, weighted=False):
    """C sqrt((|Σ| n (ln n + 1) + ln(1/δ)) / m); with ``weighted`` the
    confidence is split over sizes as δ 2^-n.
    """
    if m < 1 or n < 1:
        raise ValueError("m and n must be at least 1")
    if weighted:
        delta = delta*2.0**(-n)
    return C*math.sqrt((numSymbols*n*(math.log(n) + 1)
                        + math.log(1/delta))/m)


def sample_size_bound(epsilon, delta, numSymbols, C=1.0, c=1.0):
    """Smallest m with 2C sqrt(X/m) <= ε, where
    X = c|Σ|(1/ε)(ln(c/ε) + 1) + ln(1/δ).
    """
    if min(epsilon, delta, numSymbols, C, c) <= 0:
        raise ValueError("All parameters must be positive")
    complexity = (c*numSymbols*(1/epsilon)*(math.log(c/epsilon) + 1)
                  + math.log(1/delta))
    if complexity <= 0:
        return 1
    holds = lambda m: 2*C*math.sqrt(complexity/m) <= epsilon
    m = max(1, int(math.ceil(4*C*C*complexity/(epsilon*epsilon))))
    while m > 1 and holds(m - 1):
        m -= 1
    while not holds(m):
        m += 1
    return m


def table_count(numStates, numSymbols):
    return numStates**(numStates*numSymbols)


def transition_tables(numStates, numSymbols, chunkSize=TABLE_CHUNK):
    """Every ``numStates x numSymbols`` transition table, as arrays of
    shape (chunk, numStates, numSymbols) in odometer order.
    """
    cells = numStates*numSymbols
    total = table_count(numStates, numSymbols)
    powers = numStates**np.arange(cells - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, chunkSize):
        codes = np.arange(start, min(total, start + chunkSize),
                          dtype=np.int64)
        digits = (codes[:, None]//powers[None, :]) % numStates
        yield digits.reshape(-1, numStates, numSymbols)


class WeightedStrings(object):
    """Distinct strings with the weight of their positive and negative
    occurrences, padded for vectorized runs.

    Arguments:
        alphabet: an :class:`.Alphabet`

        items: iterable of (string, label, weight)
    """

    def __init__(self, alphabet, items):
        self.alphabet = as_alphabet(alphabet)
        weights = OrderedDict()
        for (w, label, weight) in items:
            pos, neg = weights.get(w, (0, 0))
            weights[w] = (pos + weight, neg) if label else (pos, neg + weight)
        self.strings = list(weights)
        self.positive = np.array([float(x[0]) for x in weights.values()])
        self.negative = np.array([float(x[1]) for x in weights.values()])
        encoded = [self.alphabet.encode(w) for w in self.strings]
        self.lengths = np.array([len(x) for x in encoded], dtype=int)
        maxLength = max([0] + list(self.lengths))
        self.padded = np.zeros((len(encoded), maxLength), dtype=int)
        for i, indices in enumerate(encoded):
            self.padded[i, :len(indices)] = indices

    @classmethod
    def fromSample(cls, sample, alphabet=None):
        alphabet = sample.alphabet if alphabet is None else alphabet
        return cls(alphabet, ((w, label, 1) for (w, label) in sample))

    def __len__(self):
        return len(self.strings)

    def finalStates(self, tables):
        """State each string ends in, per table: shape (T, strings)."""
        numTables = tables.shape[0]
        rows = np.arange(numTables)[:, None]
        states = np.zeros((numTables, len(self)), dtype=int)
        for t in range(self.padded.shape[1]):
            active = t < self.lengths
            nextStates = tables[rows, states, self.padded[None, :, t]]
            states = np.where(active[None, :], nextStates, states)
        return states

    def bestDfaOfSize(self, numStates):
        """Transition table and accepting set of least weighted error
        among all DFAs with ``numStates`` states.

        Each state accepts iff the positive weight ending there exceeds
        the negative weight, which is optimal for a fixed table; the
        first optimal table in odometer order wins.

        Returns:
            (error weight, :class:`.Dfa`)
        """
        numSymbols = len(self.alphabet)
        best = None
        for tables in transition_tables(numStates, numSymbols):
            numTables = tables.shape[0]
            flat = (self.finalStates(tables)
                    + numStates*np.arange(numTables)[:, None]).ravel()
            size = numTables*numStates
            pos = np.bincount(flat, weights=np.tile(self.positive, numTables),
                              minlength=size).reshape(numTables, numStates)
            neg = np.bincount(flat, weights=np.tile(self.negative, numTables),
                              minlength=size).reshape(numTables, numStates)
            errors = np.minimum(pos, neg).sum(axis=1)
            idx = int(np.argmin(errors))
            if best is None or errors[idx] < best[0]:
                best = (float(errors[idx]), tables[idx].copy(),
                        np.nonzero(pos[idx] > neg[idx])[0])
        error, table, accepting = best
        return error, Dfa(self.alphabet, table, 0, accepting)


def learn_srm(sample, cfg=None, alphabet=None):
    """Structural risk minimization over DFAs of size 1..sizeCap.

    Sizes whose transition tables number at most ``enumerationLimit``
    are searched exhaustively; if some size is beyond that, the RPNI
    automaton of the majority-labeled sample joins the candidates when
    it fits under the cap. The minimizer of L_S + penalty wins, ties
    going to the smaller DFA.

    Returns:
        a :class:`.SrmResult`
    """
    cfg = LearnerConfig() if cfg is None else cfg
    alphabet = sample.alphabet if alphabet is None else as_alphabet(alphabet)
    m = len(sample)
    if m == 0:
        raise ValueError("learn_srm needs a nonempty sample")
    numSymbols = len(alphabet)
    strings = WeightedStrings.fromSample(sample, alphabet)
    trace = []
    best = None
    needsRpni = False
    for numStates in range(1, cfg.sizeCap + 1):
        if table_count(numStates, numSymbols) > cfg.enumerationLimit:
            needsRpni = True
            continue
        error, dfa = strings.bestDfaOfSize(numStates)
        risk = error/m
        penalty = srm_penalty(numSymbols, numStates, m, cfg.C)
        trace.append(OrderedDict([("size", numStates), ("L_S", risk),
                                  ("objective", risk + penalty),
                                  ("source", EXHAUSTIVE)]))
        if best is None or risk + penalty < best[0] + best[1]:
            best = (risk, penalty, dfa)
    if needsRpni:
        dfa = rpni(majority_labels(sample), alphabet)
        risk = empirical_risk(dfa, sample)
        penalty = srm_penalty(numSymbols, dfa.numStates, m, cfg.C)
        eligible = dfa.numStates <= cfg.sizeCap
        trace.append(OrderedDict([("size", dfa.numStates), ("L_S", risk),
                                  ("objective", risk + penalty),
                                  ("source", RPNI),
                                  ("eligible", eligible)]))
        if eligible and (best is None or risk + penalty
                         < best[0] + best[1]):
            best = (risk, penalty, dfa)
        if best is None:
            util.printWarning("RPNI produced "+str(dfa.numStates)
                              +" states, above the cap of "
                              +str(cfg.sizeCap)+"; keeping it")
            best = (risk, penalty, dfa)
    risk, penalty, dfa = best
    dfa = dfa_minimize(dfa)
    penalty = srm_penalty(numSymbols, dfa.numStates, m, cfg.C)
    return SrmResult(dfa, risk, penalty, trace, m)


def calibrate_c(candidates=(0.25, 0.5, 1.0, 2.0), numTasks=5,
                sampleSize=200, targetSize=3, sizeCap=3, maxLength=8,
                seed=fsmx.DEFAULT_SEED, verbose=False):
    """Pick C by learning seeded realizable tasks.

    Each task draws a random minimal binary DFA of ``targetSize``
    states and a sample from the uniform distribution over
    Σ^{≤maxLength}; the C with the lowest mean true risk wins, ties
    going to the smaller C.

    Returns:
        (best C, OrderedDict C -> mean true risk)
    """
    from fsmx.learning.reference import FiniteSupportLm
    from fsmx.learning.zeta import expected_risk
    lm = FiniteSupportLm.uniform(BINARY, maxLength)
    tasks = []
    randomState = fsmx.get_random_state(seed)
    for i in range(numTasks):
        target = random_minimal_dfa(targetSize, BINARY, randomState)
        strings = [lm.sample(randomState) for j in range(sampleSize)]
        tasks.append((target, [(w, target.run(w)) for w in strings]))
    meanRisks = OrderedDict()
    for C in sorted(candidates):
        cfg = LearnerConfig(C=C, sizeCap=sizeCap, seed=seed)
        risks = [float(expected_risk(learn_srm(items, cfg, BINARY).dfa,
                                     lm, target))
                 for (target, items) in tasks]
        meanRisks[C] = float(np.mean(risks))
        if verbose:
            print("C="+str(C)+" mean risk "+str(meanRisks[C]))
    bestC = min(meanRisks, key=lambda x: (meanRisks[x], x))
    return bestC, meanRisks
