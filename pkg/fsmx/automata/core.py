from __future__ import absolute_import, division, print_function
from collections import OrderedDict, deque
import itertools
import numpy as np
from fsmx.fsmxutil import util


class Alphabet(object):
    """Ordered finite set of symbols, plus a distinct end marker.

    Strings over an alphabet whose symbols are all single characters
    are plain python strings; otherwise they are tuples of symbols.

    Arguments:
        symbols: iterable of symbol identifiers (converted to str)

        endMarker: symbol used by language models to mark the end of
    a string; must not be one of ``symbols``
    """
    END_MARKER = "$"

    def __init__(self, symbols, endMarker=END_MARKER):
        symbols = tuple(str(x) for x in symbols)
        if len(symbols) == 0:
            raise ValueError("An alphabet needs at least one symbol")
        if len(set(symbols)) != len(symbols):
            raise ValueError("Duplicate symbols in "+str(symbols))
        if endMarker in symbols:
            raise ValueError("End marker "+endMarker
                             +" cannot be an ordinary symbol")
        self.symbols = symbols
        self.endMarker = endMarker
        self.symbolToIndex = dict((x, i) for (i, x) in enumerate(symbols))
        self.singleCharacter = all(len(x) == 1 for x in symbols)

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __contains__(self, symbol):
        return symbol in self.symbolToIndex

    def __eq__(self, other):
        return (isinstance(other, Alphabet)
                and self.symbols == other.symbols
                and self.endMarker == other.endMarker)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash((self.symbols, self.endMarker))

    def __repr__(self):
        return "Alphabet("+repr(list(self.symbols))+")"

    def index(self, symbol):
        if symbol not in self.symbolToIndex:
            raise util.RejectedInputError(
                "Symbol "+repr(symbol)+" not in alphabet "
                +repr(list(self.symbols)))
        return self.symbolToIndex[symbol]

    def split(self, w):
        """The symbols of string ``w`` as a list.
        """
        if isinstance(w, str):
            if self.singleCharacter:
                return list(w)
            return w.split()
        return [str(x) for x in w]

    def encode(self, w):
        return [self.index(x) for x in self.split(w)]

    def join(self, symbols):
        symbols = [str(x) for x in symbols]
        if self.singleCharacter:
            return "".join(symbols)
        return tuple(symbols)

    def decode(self, indices):
        return self.join(self.symbols[i] for i in indices)

    def withEndMarker(self):
        """Symbols of Σ_$: the ordinary symbols followed by the end marker.
        """
        return self.symbols + (self.endMarker,)

    def countUpTo(self, maxLength):
        """Size of Σ^{≤maxLength}."""
        return sum(len(self)**l for l in range(maxLength+1))

    def stringsOfLength(self, length):
        for indices in itertools.product(range(len(self)), repeat=length):
            yield self.decode(indices)

    def strings(self, maxLength, minLength=0):
        """Σ^{≤maxLength} in length-lexicographic order.
        """
        for length in range(minLength, maxLength+1):
            for w in self.stringsOfLength(length):
                yield w

    def getJsonableObject(self):
        return list(self.symbols)

    @classmethod
    def fromJsonable(cls, obj):
        return cls(obj)


BINARY = Alphabet(["0", "1"])


def as_alphabet(alphabet):
    if isinstance(alphabet, Alphabet):
        return alphabet
    return Alphabet(alphabet)


class Dfa(object):
    """Complete deterministic finite automaton.

    Arguments:
        alphabet: an :class:`.Alphabet` (or a list of symbols)

        delta: ``numStates x len(alphabet)`` table of next states

        initial: index of the initial state

        accepting: iterable of accepting state indices
    """

    def __init__(self, alphabet, delta, initial=0, accepting=()):
        self.alphabet = as_alphabet(alphabet)
        delta = np.array(delta, dtype=int)
        if delta.ndim != 2 or delta.shape[1] != len(self.alphabet):
            raise ValueError("delta must have one column per symbol, got"
                             " shape "+str(delta.shape))
        if delta.shape[0] < 1:
            raise ValueError("A DFA needs at least one state")
        numStates = delta.shape[0]
        if delta.min() < 0 or delta.max() >= numStates:
            raise ValueError("delta refers to a nonexistent state")
        if initial < 0 or initial >= numStates:
            raise ValueError("invalid initial state "+str(initial))
        accepting = frozenset(int(x) for x in accepting)
        if any(x < 0 or x >= numStates for x in accepting):
            raise ValueError("accepting set refers to a nonexistent state")
        delta.setflags(write=False)
        self.delta = delta
        self.initial = int(initial)
        self.accepting = accepting
        self.acceptingMask = np.array([x in accepting
                                       for x in range(numStates)])
        self.acceptingMask.setflags(write=False)

    @property
    def numStates(self):
        return self.delta.shape[0]

    def __len__(self):
        return self.numStates

    def __eq__(self, other):
        return (isinstance(other, Dfa)
                and self.alphabet == other.alphabet
                and self.initial == other.initial
                and self.accepting == other.accepting
                and np.array_equal(self.delta, other.delta))

    def __ne__(self, other):
        return not self.__eq__(other)

    def __repr__(self):
        return ("Dfa(states="+str(self.numStates)+", initial="
                +str(self.initial)+", accepting="
                +str(sorted(self.accepting))+")")

    def isAccepting(self, state):
        return state in self.accepting

    def transition(self, state, symbol):
        return int(self.delta[state, self.alphabet.index(symbol)])

    def stateAfter(self, w, start=None):
        state = self.initial if start is None else start
        for idx in self.alphabet.encode(w):
            state = self.delta[state, idx]
        return int(state)

    def run(self, w):
        return self.isAccepting(self.stateAfter(w))

    def __call__(self, w):
        return self.run(w)

    def complement(self):
        return Dfa(self.alphabet, self.delta, self.initial,
                   [x for x in range(self.numStates)
                    if x not in self.accepting])

    def getJsonableObject(self):
        return OrderedDict([
            ("alphabet", self.alphabet.getJsonableObject()),
            ("states", self.numStates),
            ("initial", self.initial),
            ("accepting", sorted(self.accepting)),
            ("delta", [[int(x) for x in row] for row in self.delta])])

    @classmethod
    def fromJsonable(cls, obj):
        dfa = cls(alphabet=Alphabet.fromJsonable(obj["alphabet"]),
                  delta=obj["delta"], initial=obj["initial"],
                  accepting=obj["accepting"])
        if dfa.numStates != obj["states"]:
            raise ValueError("states field disagrees with delta")
        return dfa


def dfa_run(dfa, w):
    """Acceptance of ``w`` by ``dfa``.
    """
    return dfa.run(w)


def reachable_states(dfa):
    """Reachable states in BFS order from the initial state, visiting
    symbols in alphabet order.
    """
    order = [dfa.initial]
    seen = set(order)
    queue = deque(order)
    while queue:
        state = queue.popleft()
        for nextState in dfa.delta[state]:
            nextState = int(nextState)
            if nextState not in seen:
                seen.add(nextState)
                order.append(nextState)
                queue.append(nextState)
    return order


def dfa_minimize(dfa):
    """Minimal complete DFA recognizing the same language.

    Unreachable states are dropped, then blocks of the accepting /
    rejecting partition are refined until each block's members agree
    on the block of every successor. States of the result are numbered
    in BFS order, so isomorphic inputs give equal outputs.
    """
    order = reachable_states(dfa)
    oldToNew = dict((old, new) for (new, old) in enumerate(order))
    delta = np.array([[oldToNew[int(x)] for x in dfa.delta[old]]
                      for old in order], dtype=int)
    accepting = np.array([dfa.isAccepting(old) for old in order], dtype=int)

    block = accepting
    numBlocks = len(set(block.tolist()))
    while True:
        signature = np.concatenate([block[:, None], block[delta]], axis=1)
        _, newBlock = np.unique(signature, axis=0, return_inverse=True)
        newBlock = np.asarray(newBlock).reshape(-1)
        newNumBlocks = int(newBlock.max()) + 1
        block = newBlock
        if newNumBlocks == numBlocks:
            break
        numBlocks = newNumBlocks

    blockDelta = np.zeros((numBlocks, len(dfa.alphabet)), dtype=int)
    blockAccepting = np.zeros(numBlocks, dtype=bool)
    for state in range(len(order)):
        blockDelta[block[state]] = block[delta[state]]
        blockAccepting[block[state]] = accepting[state]
    quotient = Dfa(dfa.alphabet, blockDelta, int(block[0]),
                   np.nonzero(blockAccepting)[0])
    return renumber_bfs(quotient)


def renumber_bfs(dfa):
    """Copy of a (fully reachable) DFA with states numbered by BFS order.
    """
    order = reachable_states(dfa)
    oldToNew = dict((old, new) for (new, old) in enumerate(order))
    delta = [[oldToNew[int(x)] for x in dfa.delta[old]] for old in order]
    accepting = [oldToNew[x] for x in dfa.accepting if x in oldToNew]
    return Dfa(dfa.alphabet, delta, 0, accepting)


def dfa_equiv(a, b):
    """Check language equivalence by BFS over the product automaton.

    Returns:
        ``None`` when ``a`` and ``b`` are equivalent, otherwise a
    shortest distinguishing string (lexicographically least among the
    shortest). Note the witness may be the empty string.
    """
    if a.alphabet.symbols != b.alphabet.symbols:
        raise util.AlphabetMismatchError(
            "Cannot compare DFAs over "+repr(list(a.alphabet.symbols))
            +" and "+repr(list(b.alphabet.symbols)))
    start = (a.initial, b.initial)
    parent = {start: None}
    queue = deque([start])
    while queue:
        pair = queue.popleft()
        if a.isAccepting(pair[0]) != b.isAccepting(pair[1]):
            symbols = []
            while parent[pair] is not None:
                pair, symbolIdx = parent[pair]
                symbols.append(symbolIdx)
            return a.alphabet.decode(reversed(symbols))
        for symbolIdx in range(len(a.alphabet)):
            nextPair = (int(a.delta[pair[0], symbolIdx]),
                        int(b.delta[pair[1], symbolIdx]))
            if nextPair not in parent:
                parent[nextPair] = (pair, symbolIdx)
                queue.append(nextPair)
    return None


def dfa_equivalent(a, b):
    return dfa_equiv(a, b) is None


def nerode_prefixes(dfa):
    """Map each reachable state to its length-lex least access string.

    Returns:
        OrderedDict state -> prefix, in BFS discovery order
    """
    prefixes = OrderedDict([(dfa.initial, [])])
    queue = deque([dfa.initial])
    while queue:
        state = queue.popleft()
        for symbolIdx in range(len(dfa.alphabet)):
            nextState = int(dfa.delta[state, symbolIdx])
            if nextState not in prefixes:
                prefixes[nextState] = prefixes[state] + [symbolIdx]
                queue.append(nextState)
    return OrderedDict((state, dfa.alphabet.decode(indices))
                       for (state, indices) in prefixes.items())


def random_dfa(numStates, alphabet=BINARY, randomState=None,
               acceptProb=0.5):
    """Random complete DFA with initial state 0.
    """
    alphabet = as_alphabet(alphabet)
    if randomState is None:
        from fsmx import random as randomState
    delta = randomState.randint(numStates, size=(numStates, len(alphabet)))
    accepting = np.nonzero(randomState.rand(numStates) < acceptProb)[0]
    return Dfa(alphabet, delta, 0, accepting)


def random_minimal_dfa(numStates, alphabet=BINARY, randomState=None,
                       maxTries=10000):
    """Random DFA whose minimal form has exactly ``numStates`` states.
    """
    for i in range(maxTries):
        dfa = dfa_minimize(random_dfa(numStates, alphabet, randomState))
        if dfa.numStates == numStates:
            return dfa
    raise RuntimeError("No minimal DFA of size "+str(numStates)
                       +" found in "+str(maxTries)+" tries")


def single_state_dfa(alphabet, accepting=False):
    alphabet = as_alphabet(alphabet)
    return Dfa(alphabet, [[0]*len(alphabet)], 0, [0] if accepting else [])


def read_dfa_file(fileName):
    return Dfa.fromJsonable(util.read_json(fileName))


def write_dfa_file(fileName, dfa):
    util.write_json(fileName, dfa.getJsonableObject())
