from __future__ import absolute_import, division, print_function
from collections import OrderedDict
import numpy as np
import fsmx
from fsmx.extraction.oracles import as_oracle
from fsmx.training.core import GenerateStringNTimes
from fsmx.training.stringgen import UniformSupportStringGenerator

GEN_SAMPLE_SIZE = 2000
GROUP_FIELDS = ("cell", "dim", "grammar", "method")


def success_percentage(flags):
    """100 times the fraction of true flags."""
    flags = list(flags)
    if len(flags) == 0:
        raise ValueError("Cannot compute a success rate of an empty group")
    return 100.0*sum(1 for x in flags if x)/len(flags)


def group_records(records, fields=GROUP_FIELDS):
    groups = OrderedDict()
    for record in records:
        key = tuple(getattr(record, x) for x in fields)
        groups.setdefault(key, []).append(record)
    return groups


def success_rate(records, fields=GROUP_FIELDS):
    """Success percentage of each (cell, dim, grammar, method) group.

    Returns:
        OrderedDict group key -> percentage
    """
    return OrderedDict((key, success_percentage(x.success for x in group))
                       for (key, group) in group_records(records,
                                                         fields).items())


def gen_accuracy(dfa, oracle, supportLength, sampleSize=GEN_SAMPLE_SIZE,
                 seed=fsmx.DEFAULT_SEED):
    """Fraction of strings on which ``dfa`` and ``oracle`` agree.

    Strings are drawn uniformly from Σ^{≤supportLength}; with
    ``sampleSize`` None every string of the support is compared.
    """
    oracle = as_oracle(oracle)
    if sampleSize is None:
        strings = dfa.alphabet.strings(supportLength)
    else:
        randomState = fsmx.get_random_state(seed)
        strings = GenerateStringNTimes(
            UniformSupportStringGenerator(dfa.alphabet, supportLength,
                                          randomState=randomState),
            sampleSize).generateStrings()
    agreements = [dfa.run(w) == oracle.membership(w) for w in strings]
    return float(np.mean(agreements))
