from __future__ import absolute_import, division, print_function
from collections import OrderedDict, deque
import numpy as np
import fsmx
from fsmx.fsmxutil import util
from fsmx.automata.core import Dfa, dfa_equiv, dfa_minimize
from fsmx.extraction.core import ExtractionResult, Stopwatch, LSTAR
from fsmx.extraction.oracles import as_oracle


class ObservationTable(object):
    """Angluin-style table over prefixes S and suffixes E.

    Words are tuples of symbols. Counterexamples are handled by adding
    all their suffixes to E, so S stays prefix-closed with pairwise
    distinct rows.

    Arguments:
        alphabet: an :class:`.Alphabet`

        membership: callable tuple-of-symbols -> bool
    """

    def __init__(self, alphabet, membership):
        self.alphabet = alphabet
        self.membership = membership
        self.S = [()]
        self.E = [()]
        self.cache = {}

    def query(self, word):
        if word not in self.cache:
            self.cache[word] = bool(self.membership(word))
        return self.cache[word]

    def row(self, prefix):
        return tuple(self.query(prefix + suffix) for suffix in self.E)

    def extensions(self):
        return [s + (a,) for s in self.S for a in self.alphabet]

    def findUnclosed(self):
        rows = set(self.row(s) for s in self.S)
        for extension in self.extensions():
            if self.row(extension) not in rows:
                return extension
        return None

    def findInconsistency(self):
        """A suffix a·e separating two equal rows of S, or None."""
        for i, s1 in enumerate(self.S):
            for s2 in self.S[i+1:]:
                if self.row(s1) != self.row(s2):
                    continue
                for a in self.alphabet:
                    for e in self.E:
                        if self.query(s1 + (a,) + e)\
                                != self.query(s2 + (a,) + e):
                            return (a,) + e
        return None

    def isClosed(self):
        return self.findUnclosed() is None

    def isConsistent(self):
        return self.findInconsistency() is None

    def complete(self):
        """Extend S and E until the table is closed and consistent."""
        while True:
            unclosed = self.findUnclosed()
            if unclosed is not None:
                self.S.append(unclosed)
                continue
            suffix = self.findInconsistency()
            if suffix is not None:
                self.E.append(suffix)
                continue
            return

    def addCounterexample(self, word):
        for i in range(len(word) + 1):
            suffix = tuple(word[i:])
            if suffix not in self.E:
                self.E.append(suffix)

    def hypothesis(self):
        """Minimized DFA whose states are the distinct rows of S."""
        rowToState = OrderedDict()
        for s in self.S:
            rowToState.setdefault(self.row(s), len(rowToState))
        delta = [None]*len(rowToState)
        accepting = []
        for s in self.S:
            state = rowToState[self.row(s)]
            if delta[state] is not None:
                continue
            delta[state] = [rowToState[self.row(s + (a,))]
                            for a in self.alphabet]
            if self.query(s):
                accepting.append(state)
        return dfa_minimize(Dfa(self.alphabet, delta,
                                rowToState[self.row(())], accepting))


class AbstractionPartition(object):
    """Refinable partition of feature space into axis-aligned boxes.

    Internally a binary tree of splits (axis, threshold); leaves are
    cells. Refinement only splits cells. Each cell remembers the first
    vector seen in it as its witness.

    Arguments:
        dim: feature dimension

        initialSplits: rounds of midpoint splits of [0, 1]^d, cycling
    through the axes
    """

    def __init__(self, dim, initialSplits=0):
        self.dim = dim
        # node: [axis, threshold, low child, high child] or [cellId]
        self.nodes = [[0]]
        self.leafNode = {0: 0}
        self.boxes = {0: (np.zeros(dim), np.ones(dim))}
        self.witnesses = {}
        for depth in range(initialSplits):
            axis = depth % dim
            for cell in list(self.leafNode):
                low, high = self.boxes[cell]
                self._split(cell, axis, (low[axis] + high[axis])/2.0)

    @property
    def numCells(self):
        return len(self.leafNode)

    def cellOf(self, features):
        node = self.nodes[0]
        while len(node) > 1:
            axis, threshold, lowChild, highChild = node
            node = self.nodes[lowChild if features[axis] < threshold
                              else highChild]
        return node[0]

    def observe(self, vector, features):
        """Cell of ``features``; records ``vector`` as its witness if the
        cell has none yet."""
        cell = self.cellOf(features)
        if cell not in self.witnesses:
            self.witnesses[cell] = (vector, features)
        return cell

    def _split(self, cell, axis, threshold):
        nodeIdx = self.leafNode.pop(cell)
        low, high = self.boxes.pop(cell)
        self.witnesses.pop(cell, None)
        lowCell = cell
        highCell = max(list(self.leafNode) + [cell]) + 1
        for newCell in (lowCell, highCell):
            self.leafNode[newCell] = len(self.nodes)
            self.nodes.append([newCell])
        lowHigh = high.copy()
        lowHigh[axis] = min(high[axis], threshold)
        highLow = low.copy()
        highLow[axis] = max(low[axis], threshold)
        self.boxes[lowCell] = (low, lowHigh)
        self.boxes[highCell] = (highLow, high)
        self.nodes[nodeIdx] = [axis, threshold, self.leafNode[lowCell],
                               self.leafNode[highCell]]
        return lowCell, highCell

    def refine(self, vector1, features1, vector2, features2):
        """Split the cell holding both points at the midpoint of the
        coordinate where they differ most.

        Returns:
            False if the features coincide and cannot be separated
        """
        features1 = np.asarray(features1, dtype=float)
        features2 = np.asarray(features2, dtype=float)
        gap = np.abs(features1 - features2)
        if gap.max() == 0:
            return False
        axis = int(np.argmax(gap))
        cell = self.cellOf(features1)
        assert cell == self.cellOf(features2)
        self._split(cell, axis, (features1[axis] + features2[axis])/2.0)
        self.observe(vector1, features1)
        self.observe(vector2, features2)
        return True

    def getJsonableObject(self):
        return OrderedDict([("dim", self.dim), ("cells", self.numCells)])


def distinguishing_suffix(dfa, p, q):
    """Shortest string on which states ``p`` and ``q`` disagree."""
    return dfa_equiv(Dfa(dfa.alphabet, dfa.delta, p, dfa.accepting),
                     Dfa(dfa.alphabet, dfa.delta, q, dfa.accepting))


class _LstarRun(object):

    def __init__(self, oracle, cfg):
        self.oracle = oracle
        self.cfg = cfg
        self.alphabet = oracle.alphabet
        self.membershipQueries = 0
        self.refinements = 0
        self.unsplittable = 0
        self.blocked = False
        self.randomState = fsmx.get_random_state(cfg.seed)
        initial = oracle.initial()
        self.partition = AbstractionPartition(
            len(oracle.features(initial)), cfg.initialSplits)
        self.table = ObservationTable(self.alphabet, self.member)

    def classify(self, vector):
        self.membershipQueries += 1
        return bool(self.oracle.classify(vector))

    def member(self, word):
        return self.classify(self.oracle.run(word))

    def canRefine(self):
        return self.refinements < self.cfg.refinementBudget

    def refine(self, vector1, vector2):
        if not self.canRefine():
            self.blocked = True
            return False
        done = self.partition.refine(vector1, self.oracle.features(vector1),
                                     vector2, self.oracle.features(vector2))
        if done:
            self.refinements += 1
        elif np.any(np.asarray(vector1) != np.asarray(vector2)):
            # e.g. LSTM states that share h and differ in c
            self.unsplittable += 1
            util.printWarning("oracle states disagree but share their"
                              " hidden features; the cell stays unsplit")
        return done

    def explore(self, hypothesis):
        """Walk the oracle and the hypothesis together, breadth-first.

        Returns:
            ("counterexample", word), ("refined", None) or (None, None)
        """
        oracle = self.oracle
        start = oracle.initial()
        seen = set([(start.tobytes(), hypothesis.initial)])
        queue = deque([((), start, hypothesis.initial)])
        cellOwners = {}
        visited = 0
        while queue and visited < self.cfg.explorationBudget:
            word, vector, state = queue.popleft()
            visited += 1
            if self.classify(vector) != hypothesis.isAccepting(state):
                return "counterexample", word
            features = oracle.features(vector)
            cell = self.partition.observe(vector, features)
            if cell in cellOwners:
                ownerWord, ownerVector, ownerState = cellOwners[cell]
                if ownerState != state:
                    outcome = self._adjudicateMerge(
                        hypothesis, word, vector, state,
                        ownerWord, ownerVector, ownerState)
                    if outcome[0] is not None:
                        return outcome
            else:
                cellOwners[cell] = (word, vector, state)
            for k, symbol in enumerate(self.alphabet):
                nextVector = oracle.step(vector, symbol)
                nextState = int(hypothesis.delta[state, k])
                key = (nextVector.tobytes(), nextState)
                if key not in seen:
                    seen.add(key)
                    queue.append((word + (symbol,), nextVector, nextState))
        return None, None

    def _adjudicateMerge(self, hypothesis, word1, vector1, state1,
                         word2, vector2, state2):
        suffix = distinguishing_suffix(hypothesis, state1, state2)
        if suffix is None:
            return None, None
        suffix = tuple(self.alphabet.split(suffix))
        answer1 = self.member(word1 + suffix)
        answer2 = self.member(word2 + suffix)
        if answer1 != answer2:
            if self.refine(vector1, vector2):
                return "refined", None
            return None, None
        for word, answer in [(word1 + suffix, answer1),
                             (word2 + suffix, answer2)]:
            if hypothesis.run(word) != answer:
                return "counterexample", word
        return None, None

    def abstractTrace(self, word):
        """Cells visited by the abstraction automaton on ``word``."""
        start = self.oracle.initial()
        cell = self.partition.observe(start, self.oracle.features(start))
        cells = [cell]
        for symbol in word:
            witness = self.partition.witnesses[cell][0]
            successor = self.oracle.step(witness, symbol)
            cell = self.partition.observe(successor,
                                          self.oracle.features(successor))
            cells.append(cell)
        return cells

    def sampleWords(self, hypothesis):
        """Compare the hypothesis with the abstraction automaton on
        random words; disagreements are settled by the oracle.
        """
        maxLength = 2*hypothesis.numStates
        for i in range(self.cfg.equivalenceSamples):
            length = self.randomState.randint(maxLength + 1)
            word = tuple(self.alphabet.symbols[x] for x in
                         self.randomState.randint(len(self.alphabet),
                                                  size=length))
            cells = self.abstractTrace(word)
            abstractLabel = self.classify(
                self.partition.witnesses[cells[-1]][0])
            if abstractLabel == hypothesis.run(word):
                continue
            vectors = [self.oracle.initial()]
            for symbol in word:
                vectors.append(self.oracle.step(vectors[-1], symbol))
            if self.classify(vectors[-1]) != hypothesis.run(word):
                return "counterexample", word
            if self._refineAlong(vectors, cells):
                return "refined", None
        return None, None

    def _refineAlong(self, vectors, cells):
        oracle = self.oracle
        for t, vector in enumerate(vectors):
            if self.partition.cellOf(oracle.features(vector)) != cells[t]:
                # the witness of the previous cell disagrees with vectors[t-1]
                witness = self.partition.witnesses[cells[t - 1]][0]
                return self.refine(vectors[t - 1], witness)
        witness = self.partition.witnesses[cells[-1]][0]
        return self.refine(vectors[-1], witness)

    def run(self):
        hypothesisSizes = []
        equivalenceQueries = 0
        converged = False
        hypothesis = None
        while True:
            self.table.complete()
            hypothesis = self.table.hypothesis()
            hypothesisSizes.append(hypothesis.numStates)
            equivalenceQueries += 1
            outcome = ("refined", None)
            while outcome[0] == "refined":
                outcome = self.explore(hypothesis)
                if outcome[0] is None:
                    outcome = self.sampleWords(hypothesis)
            if outcome[0] is None:
                converged = not self.blocked
                break
            if equivalenceQueries >= self.cfg.equivalenceBudget:
                break
            self.table.addCounterexample(outcome[1])
        return hypothesis, converged, equivalenceQueries, hypothesisSizes


def extract_lstar(oracle, cfg):
    """L* with membership queries answered by the oracle and equivalence
    queries answered against a refinable abstraction of its state space.

    Each equivalence query first walks the oracle and the hypothesis
    together. A label disagreement is a counterexample. Two vectors in
    one cell but in different hypothesis states are told apart by a
    suffix the hypothesis distinguishes them with: if the oracle agrees
    they differ the cell is split, otherwise the hypothesis is wrong on
    one of the two words. Random words of length up to twice the
    hypothesis size then compare the hypothesis with the abstraction
    automaton, and the oracle settles each disagreement the same way.

    The run is converged when an equivalence query finds nothing left
    to fix before the refinement and equivalence budgets run out.
    """
    watch = Stopwatch()
    oracle = as_oracle(oracle)
    run = _LstarRun(oracle, cfg)
    hypothesis, converged, equivalenceQueries, sizes = run.run()
    return ExtractionResult(
        hypothesis, LSTAR, cfg, runtimeMs=watch.elapsedMs(),
        converged=converged, membershipQueries=run.membershipQueries,
        equivalenceQueries=equivalenceQueries,
        extra=OrderedDict([("hypothesisSizes", sizes),
                           ("refinements", run.refinements),
                           ("unsplittable", run.unsplittable),
                           ("cells", run.partition.numCells),
                           ("prefixes", len(run.table.S)),
                           ("suffixes", len(run.table.E))]))
