from __future__ import absolute_import, division, print_function
from collections import OrderedDict
import itertools
import re
import fsmx
from fsmx.automata.core import Dfa, BINARY
from fsmx.training.datagen import DatasetSpec, UNIFORM_UPSAMPLED

TOMITA_IDS = tuple(range(1, 8))

#canonical minimal DFAs in BFS order: (delta rows over "0","1", accepting)
_TOMITA_TABLES = OrderedDict([
    (1, ([[1, 0], [1, 1]], [0])),
    (2, ([[1, 2], [1, 1], [0, 1]], [0])),
    (3, ([[1, 0], [0, 2], [3, 4], [3, 3], [1, 2]], [0, 1, 4])),
    (4, ([[1, 0], [2, 0], [3, 0], [3, 3]], [0, 1, 2])),
    (5, ([[1, 2], [0, 3], [3, 0], [2, 1]], [0])),
    (6, ([[1, 2], [2, 0], [0, 1]], [0])),
    (7, ([[0, 1], [2, 1], [2, 3], [4, 3], [4, 4]], [0, 1, 2, 3]))])

DESCRIPTIONS = OrderedDict([
    (1, "1*"),
    (2, "(10)*"),
    (3, "no odd run of 0s immediately followed by an odd run of 1s"),
    (4, "no 000 substring"),
    (5, "even number of 0s and even number of 1s"),
    (6, "number of 0s minus number of 1s divisible by 3"),
    (7, "0*1*0*1*")])

#grammar -> (support length, training set size)
SETTINGS = OrderedDict([(1, (22, 800)), (2, (22, 800)), (3, (25, 1500)),
                        (4, (22, 950)), (5, (25, 1200)), (6, (30, 1200)),
                        (7, (35, 1750))])


def _check_id(grammarId):
    if grammarId not in _TOMITA_TABLES:
        raise ValueError("Tomita grammars are numbered 1 to 7, got "
                         +str(grammarId))


def tomita_dfa(grammarId):
    """Canonical minimal DFA of a Tomita grammar over {0, 1}."""
    _check_id(grammarId)
    delta, accepting = _TOMITA_TABLES[grammarId]
    return Dfa(BINARY, delta, 0, accepting)


def _odd_odd_runs(w):
    runs = [(symbol, len(list(group)))
            for (symbol, group) in itertools.groupby(w)]
    return any(first[0] == "0" and second[0] == "1"
               and first[1] % 2 == 1 and second[1] % 2 == 1
               for (first, second) in zip(runs, runs[1:]))


_PREDICATES = OrderedDict([
    (1, lambda w: "0" not in w),
    (2, lambda w: w == "10"*(len(w)//2)),
    (3, lambda w: not _odd_odd_runs(w)),
    (4, lambda w: "000" not in w),
    (5, lambda w: w.count("0") % 2 == 0 and w.count("1") % 2 == 0),
    (6, lambda w: (w.count("0") - w.count("1")) % 3 == 0),
    (7, lambda w: re.match(r"^0*1*0*1*$", w) is not None)])


def tomita_predicate(grammarId):
    """Membership of a Tomita grammar computed from its description,
    without an automaton.
    """
    _check_id(grammarId)
    return _PREDICATES[grammarId]


def tomita_dataset_spec(grammarId, strategy=UNIFORM_UPSAMPLED,
                        seed=fsmx.DEFAULT_SEED, **kwargs):
    """:class:`.DatasetSpec` with the grammar's support length and
    training set size.
    """
    _check_id(grammarId)
    maxLength, size = SETTINGS[grammarId]
    return DatasetSpec(strategy=strategy, maxLength=maxLength, size=size,
                       seed=seed, **kwargs)
