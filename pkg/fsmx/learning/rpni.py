from __future__ import absolute_import, division, print_function
from collections import OrderedDict
from fsmx.fsmxutil import util
from fsmx.automata.core import Dfa, as_alphabet, dfa_minimize


class PrefixTreeAcceptor(object):
    """Tree of the prefixes of a labeled sample.

    Node ids follow length-lexicographic order of the access strings,
    which is the order RPNI considers blue states in.

    Arguments:
        alphabet: an :class:`.Alphabet`

        items: iterable of (string, label)
    """

    def __init__(self, alphabet, items):
        self.alphabet = as_alphabet(alphabet)
        children = [dict()]
        labels = [None]
        for (w, label) in items:
            node = 0
            for idx in self.alphabet.encode(w):
                if idx not in children[node]:
                    children[node][idx] = len(children)
                    children.append(dict())
                    labels.append(None)
                node = children[node][idx]
            if labels[node] is not None and labels[node] != bool(label):
                raise util.ContradictoryLabelsError(
                    repr(w)+" is labeled both ways")
            labels[node] = bool(label)
        self.children, self.labels = self._renumber(children, labels)

    def _renumber(self, children, labels):
        order = [0]
        for node in order:
            for idx in sorted(children[node]):
                order.append(children[node][idx])
        newId = dict((old, new) for (new, old) in enumerate(order))
        return ([dict((idx, newId[target]) for (idx, target)
                      in children[old].items()) for old in order],
                [labels[old] for old in order])

    def __len__(self):
        return len(self.children)


class _MergeState(object):
    """Transitions and labels being folded, with an undo log so a
    rejected merge can be rolled back.
    """

    def __init__(self, pta):
        self.trans = [dict(x) for x in pta.children]
        self.labels = list(pta.labels)
        self.log = []

    def setTransition(self, state, idx, target):
        self.log.append(("trans", state, idx, self.trans[state].get(idx)))
        self.trans[state][idx] = target

    def setLabel(self, state, label):
        self.log.append(("label", state, None, self.labels[state]))
        self.labels[state] = label

    def commit(self):
        self.log = []

    def rollback(self):
        for (kind, state, idx, old) in reversed(self.log):
            if kind == "label":
                self.labels[state] = old
            elif old is None:
                del self.trans[state][idx]
            else:
                self.trans[state][idx] = old
        self.log = []

    def fold(self, red, blue):
        """Fold the tree rooted at ``blue`` into ``red``.

        Returns:
            False on a label conflict (the caller rolls back)
        """
        pending = [(red, blue)]
        while pending:
            target, source = pending.pop()
            label = self.labels[source]
            if label is not None:
                if self.labels[target] is None:
                    self.setLabel(target, label)
                elif self.labels[target] != label:
                    return False
            for idx, child in sorted(self.trans[source].items()):
                if idx in self.trans[target]:
                    pending.append((self.trans[target][idx], child))
                else:
                    self.setTransition(target, idx, child)
        return True

    def tryMerge(self, red, blue, parent, idx):
        self.setTransition(parent, idx, red)
        if self.fold(red, blue):
            self.commit()
            return True
        self.rollback()
        return False


def _blue_states(merge, red):
    redSet = set(red)
    blue = {}
    for state in red:
        for idx, target in merge.trans[state].items():
            if target not in redSet and target not in blue:
                blue[target] = (state, idx)
    return blue


def rpni(sample, alphabet=None):
    """Regular positive and negative inference by red/blue state merging.

    The prefix tree of the sample is folded: the smallest blue state is
    merged into the first red state it is compatible with, or promoted
    to red. Transitions left undefined go to a rejecting sink and
    unlabeled states reject. The result is minimized and consistent
    with every labeled string of the sample.

    Arguments:
        sample: a :class:`.LabeledSample` or a list of (string, label)

        alphabet: required when ``sample`` is a plain list

    Raises:
        ContradictoryLabelsError: a string appears with both labels
    """
    if alphabet is None:
        alphabet = sample.alphabet
    alphabet = as_alphabet(alphabet)
    pta = PrefixTreeAcceptor(alphabet, list(sample))
    merge = _MergeState(pta)
    red = [0]
    while True:
        blue = _blue_states(merge, red)
        if len(blue) == 0:
            break
        candidate = min(blue)
        parent, idx = blue[candidate]
        if not any(merge.tryMerge(state, candidate, parent, idx)
                   for state in red):
            red.append(candidate)
    return _to_dfa(alphabet, merge, red)


def _to_dfa(alphabet, merge, red):
    stateId = OrderedDict((state, i) for (i, state) in enumerate(red))
    sink = len(red)
    delta = []
    for state in red:
        delta.append([stateId[merge.trans[state][idx]]
                      if idx in merge.trans[state] else sink
                      for idx in range(len(alphabet))])
    delta.append([sink]*len(alphabet))
    accepting = [stateId[x] for x in red if merge.labels[x] is True]
    return dfa_minimize(Dfa(alphabet, delta, 0, accepting))


def majority_labels(sample):
    """One item per distinct string, labeled by majority vote (ties
    reject).
    """
    votes = OrderedDict()
    for (w, label) in sample:
        votes[w] = votes.get(w, 0) + (1 if label else -1)
    return [(w, count > 0) for (w, count) in votes.items()]
