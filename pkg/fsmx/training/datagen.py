from __future__ import absolute_import, division, print_function
from collections import OrderedDict
import numpy as np
import fsmx
from fsmx.fsmxutil import util
from fsmx.automata.core import as_alphabet, BINARY
from fsmx.training.core import (LabeledSample, GenerateStringNTimes,
                                ChainSampleSetGenerators, LabelGenerator)
from fsmx.training.stringgen import (UniformSupportStringGenerator,
                                     ClassConditionalStringGenerator,
                                     BalancedSuffixGenerator)

UNIFORM = "uniform"
UNIFORM_UPSAMPLED = "uniform-upsampled"
PREFIX_QUOTA = "prefix-quota"
STRATEGIES = (UNIFORM, UNIFORM_UPSAMPLED, PREFIX_QUOTA)

#cap on the strings scanned while looking for BFS prefixes
PREFIX_SCAN_CAP = 10**6


class DatasetSpec(object):
    """How to draw a labeled sample.

    Arguments:
        strategy: ``"uniform"``, ``"uniform-upsampled"`` or
    ``"prefix-quota"``

        maxLength: support bound; strings come from Σ^{≤maxLength}

        size: number of strings to draw

        ratio: wanted fraction of positives (up-sampling only)

        quota: prefixes per DFA state (prefix-quota only)

        seed: random seed
    """

    def __init__(self, strategy=UNIFORM, maxLength=22, size=800, ratio=0.5,
                 quota=3, seed=fsmx.DEFAULT_SEED):
        if strategy not in STRATEGIES:
            raise ValueError("strategy must be one of "+str(STRATEGIES))
        if size < 1:
            raise ValueError("size must be at least 1")
        if maxLength < 1:
            raise ValueError("maxLength must be at least 1")
        if not 0 < ratio < 1:
            raise ValueError("ratio must lie in (0, 1)")
        if strategy == PREFIX_QUOTA and (quota is None or quota < 1):
            raise ValueError("prefix-quota needs a quota of at least 1")
        self.strategy = strategy
        self.maxLength = maxLength
        self.size = size
        self.ratio = ratio
        self.quota = quota
        self.seed = seed

    def getJsonableObject(self):
        return OrderedDict([("strategy", self.strategy),
                            ("maxLength", self.maxLength),
                            ("size", self.size),
                            ("ratio", self.ratio),
                            ("quota", self.quota),
                            ("seed", self.seed)])

    @classmethod
    def fromJsonable(cls, obj):
        return cls(**obj)


def gen_dataset(labeler, spec, dfa=None, alphabet=None):
    """Draw a labeled sample according to ``spec``.

    Arguments:
        labeler: membership function string -> bool; every label of the
    result is computed by it

        spec: a :class:`.DatasetSpec`

        dfa: target automaton; needed by prefix-quota, and used by
    up-sampling to find a minority example the uniform draw missed

        alphabet: defaults to the DFA's (or the labeler's, if it is a
    DFA), else binary

    Returns:
        a :class:`.LabeledSample`
    """
    if alphabet is None:
        if dfa is not None:
            alphabet = dfa.alphabet
        elif hasattr(labeler, "alphabet"):
            alphabet = labeler.alphabet
        else:
            alphabet = BINARY
    alphabet = as_alphabet(alphabet)
    randomState = fsmx.get_random_state(spec.seed)
    labelGenerator = LabelGenerator(labeler)
    if spec.strategy == PREFIX_QUOTA:
        if dfa is None:
            raise ValueError("prefix-quota sampling needs the target DFA")
        items = _prefix_quota_items(dfa, spec, labelGenerator, randomState)
    else:
        stringSet = GenerateStringNTimes(
            UniformSupportStringGenerator(alphabet, spec.maxLength,
                                          randomState=randomState),
            spec.size)
        items = labelGenerator.labelStrings(stringSet.generateStrings())
        if spec.strategy == UNIFORM_UPSAMPLED:
            items = _upsample(items, spec, labelGenerator, dfa, alphabet,
                              randomState)
    meta = spec.getJsonableObject()
    return LabeledSample(alphabet, items, meta)


def gen_test_set(labeler, trainData, maxLength, size, seed=fsmx.DEFAULT_SEED):
    """Uniform sample over Σ^{≤maxLength} sharing no string with
    ``trainData``; draws continue until ``size`` strings are kept.

    Raises:
        SupportExhaustedError: every string of the support is in
    ``trainData``
    """
    alphabet = trainData.alphabet
    seen = set(trainData.strings)
    supportSize = sum(len(alphabet)**l for l in range(maxLength + 1))
    inSupport = sum(1 for w in seen if len(alphabet.split(w)) <= maxLength)
    if supportSize - inSupport <= 0:
        raise util.SupportExhaustedError(
            "The training sample covers all of Σ^{≤"+str(maxLength)+"}")
    generator = UniformSupportStringGenerator(
        alphabet, maxLength, randomState=fsmx.get_random_state(seed))
    strings = []
    while len(strings) < size:
        w = generator.generateString()
        if w not in seen:
            strings.append(w)
    meta = OrderedDict([("strategy", UNIFORM), ("maxLength", maxLength),
                        ("size", size), ("seed", seed),
                        ("disjointFromTraining", True)])
    items = LabelGenerator(labeler).labelStrings(strings)
    return LabeledSample(alphabet, items, meta)


def _find_minority(label, spec, labelGenerator, dfa, alphabet, randomState):
    if dfa is not None:
        generator = ClassConditionalStringGenerator(
            dfa, label, spec.maxLength, randomState=randomState)
        if generator.available():
            w = generator.generateString()
            if labelGenerator.generateLabel(w) == label:
                return w
    generator = UniformSupportStringGenerator(alphabet, spec.maxLength,
                                              randomState=randomState)
    for i in range(100*spec.size):
        w = generator.generateString()
        if labelGenerator.generateLabel(w) == label:
            return w
    return None


def _upsample(items, spec, labelGenerator, dfa, alphabet, randomState):
    positives = [x for x in items if x[1]]
    negatives = [x for x in items if not x[1]]
    for label, members in [(True, positives), (False, negatives)]:
        if len(members) == 0:
            w = _find_minority(label, spec, labelGenerator, dfa, alphabet,
                               randomState)
            if w is None:
                raise util.UnsatisfiableRatioError(
                    "No string labeled "+str(label)+" found in the support"
                    " of length "+str(spec.maxLength))
            members.append((w, label))
    fraction = len(positives)/(len(positives) + len(negatives))
    if fraction < spec.ratio:
        minority = positives
        wanted = int(np.ceil(spec.ratio*len(negatives)/(1 - spec.ratio)))
    else:
        minority = negatives
        wanted = int(np.ceil((1 - spec.ratio)*len(positives)/spec.ratio))
    extra = [minority[i] for i in
             randomState.randint(len(minority),
                                 size=max(0, wanted - len(minority)))]
    items = positives + negatives + extra
    return [items[i] for i in randomState.permutation(len(items))]


def quota_prefixes(dfa, quota, maxLength=None):
    """For every reachable state, the ``quota`` length-lex least strings
    leading to it (fewer if the state is reached by fewer strings).

    Returns:
        OrderedDict state -> list of prefixes, states in BFS order
    """
    from fsmx.automata.core import reachable_states
    order = reachable_states(dfa)
    found = OrderedDict((state, []) for state in order)
    if maxLength is None:
        maxLength = dfa.numStates + quota
    scanned = 0
    for length in range(maxLength + 1):
        for w in dfa.alphabet.stringsOfLength(length):
            scanned += 1
            state = dfa.stateAfter(w)
            if len(found[state]) < quota:
                found[state].append(w)
            if scanned > PREFIX_SCAN_CAP:
                util.printWarning("prefix scan stopped after "
                                  +str(PREFIX_SCAN_CAP)+" strings")
                return found
        if all(len(x) >= quota for x in found.values()):
            break
    return found


def _prefix_quota_items(dfa, spec, labelGenerator, randomState):
    prefixesByState = quota_prefixes(dfa, spec.quota)
    pairs = [(state, prefix) for (state, prefixes)
             in prefixesByState.items() for prefix in prefixes]
    suffixLength = 2*dfa.numStates
    perPrefix, remainder = divmod(spec.size, len(pairs))
    generators = []
    for i, (state, prefix) in enumerate(pairs):
        count = perPrefix + (1 if i < remainder else 0)
        if count == 0:
            continue
        generators.append(_PrefixedSet(
            dfa, prefix, BalancedSuffixGenerator(
                dfa, state, suffixLength, randomState=randomState), count))
    strings = ChainSampleSetGenerators(*generators).generateStrings()
    return labelGenerator.labelStrings(strings)


class _PrefixedSet(GenerateStringNTimes):

    def __init__(self, dfa, prefix, suffixGenerator, N):
        super(_PrefixedSet, self).__init__(suffixGenerator, N)
        self.dfa = dfa
        self.prefix = prefix

    def generateStrings(self):
        for suffix in super(_PrefixedSet, self).generateStrings():
            if self.dfa.alphabet.singleCharacter:
                yield self.prefix + suffix
            else:
                yield tuple(self.prefix) + tuple(suffix)
