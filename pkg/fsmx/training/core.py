from __future__ import absolute_import, division, print_function
from collections import OrderedDict
import itertools
import numpy as np
from fsmx.fsmxutil import util
from fsmx.automata.core import Alphabet, as_alphabet, BINARY


class DefaultNameMixin(object):
    """Basic functionality for classes that have a self.name attribute.

    Arguments:
        name: string
    """

    def __init__(self, name):
        if (name == None):
            name = self.getDefaultName()
        self.name = name

    def getDefaultName(self):
        return type(self).__name__


class LabeledSample(object):
    """Multiset of (string, label) pairs plus generation metadata.

    Arguments:
        alphabet: the :class:`.Alphabet` the strings are drawn from

        items: list of (string, boolean label); duplicates allowed

        meta: OrderedDict describing how the sample was produced
    """

    def __init__(self, alphabet, items, meta=None):
        self.alphabet = as_alphabet(alphabet)
        self.items = [(x, bool(y)) for (x, y) in items]
        for (w, label) in self.items:
            self.alphabet.encode(w)
        self.meta = OrderedDict() if meta is None else OrderedDict(meta)

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __eq__(self, other):
        return (isinstance(other, LabeledSample)
                and self.alphabet == other.alphabet
                and self.items == other.items)

    def __ne__(self, other):
        return not self.__eq__(other)

    @property
    def strings(self):
        return [x[0] for x in self.items]

    @property
    def labels(self):
        return np.array([x[1] for x in self.items], dtype=bool)

    @property
    def numPositives(self):
        return sum(1 for x in self.items if x[1])

    @property
    def maxLength(self):
        return max([len(self.alphabet.split(x)) for x in self.strings] + [0])

    def subset(self, indices):
        return LabeledSample(self.alphabet, [self.items[i] for i in indices],
                             self.meta)

    def overlap(self, other):
        """Distinct strings present in both samples."""
        return set(self.strings) & set(other.strings)

    def excluding(self, strings):
        strings = set(strings)
        return self.subset([i for (i, w) in enumerate(self.strings)
                            if w not in strings])

    def concatenate(self, other):
        assert self.alphabet == other.alphabet
        return LabeledSample(self.alphabet, self.items + other.items,
                             self.meta)

    def getJsonableObject(self):
        return OrderedDict([("alphabet", self.alphabet.getJsonableObject()),
                            ("size", len(self)),
                            ("positives", self.numPositives),
                            ("meta", self.meta)])


class AbstractSampleSetGenerator(object):
    """A generator for a collection of strings.
    """

    def generateStrings(self):
        """The generator; implementation should have a yield.

        Returns:
            A generator of strings
        """
        raise NotImplementedError()

    def getJsonableObject(self):
        """Get JSON object representation.

        Returns:
            A json-friendly object (built of dictionaries, lists and
        python primitives), which can be converted to json to
        record the exact details of what was generated.
        """
        raise NotImplementedError()


class ChainSampleSetGenerators(AbstractSampleSetGenerator):
    """Chains several generators together.

    Arguments:
        generators: instances of :class:`.AbstractSampleSetGenerator`.
    """

    def __init__(self, *generators):
        self.generators = generators

    def generateStrings(self):
        for item in itertools.chain(*[generator.generateStrings()
                                      for generator in self.generators]):
            yield item

    def getJsonableObject(self):
        """See superclass
        """
        return OrderedDict([('generators',
                             [x.getJsonableObject() for x
                              in self.generators])])


class GenerateStringNTimes(AbstractSampleSetGenerator):
    """Call a :class:`.AbstractStringGenerator` N times.

    Arguments:
        stringGenerator: an instance of
            :class:`.AbstractStringGenerator`
        N: integer, the number of times to call stringGenerator
    """

    def __init__(self, stringGenerator, N):
        self.stringGenerator = stringGenerator
        self.N = N

    def generateStrings(self):
        for i in range(self.N):
            yield self.stringGenerator.generateString()

    def getJsonableObject(self):
        """See superclass.
        """
        return OrderedDict([("numStrings", self.N),
                            ("stringGenerator",
                             self.stringGenerator.getJsonableObject())])


class LabelGenerator(object):
    """Attach membership labels to generated strings.

    Arguments:
        labeler: callable string -> bool (a :class:`.Dfa` works)
    """

    def __init__(self, labeler):
        self.labeler = labeler

    def generateLabel(self, w):
        return bool(self.labeler(w))

    def labelStrings(self, strings):
        return [(w, self.generateLabel(w)) for w in strings]


def format_string(alphabet, w):
    if alphabet.singleCharacter:
        return w
    return " ".join(w)


def print_sample(outputFileName, sample, jsonableInfo=None):
    """Write a labeled sample, one ``<label><tab><string>`` per line.

    Also creates ``<outputFileName core>_info.txt`` in the same
    directory holding ``jsonableInfo`` (defaults to the sample's meta).
    """
    ofh = util.get_file_handle(outputFileName, 'w')
    for (w, label) in sample:
        ofh.write(("1" if label else "0") + "\t"
                  + format_string(sample.alphabet, w) + "\n")
    ofh.close()
    infoFilePath = (util.get_file_name_parts(outputFileName)
        .get_transformed_file_path(
        lambda x: x + "_info", extension=".txt"))
    info = OrderedDict([("alphabet", sample.alphabet.getJsonableObject()),
                        ("meta", sample.meta if jsonableInfo is None
                         else jsonableInfo)])
    util.write_json(infoFilePath, info)


def read_sample_file(sampleFile, alphabet=None):
    """Read a file written by :func:`print_sample`.

    Arguments:
        alphabet: if None, the sorted set of characters seen in the
    file (binary if the file only holds empty strings)

    Returns:
        a :class:`.LabeledSample`
    """
    items = []

    def action(inp, line_number):
        if len(inp) == 1 and inp[0] == "":
            return
        if inp[0] not in ("0", "1") or len(inp) > 2:
            raise ValueError("Line "+str(line_number)+" of "+sampleFile
                             +" is not <0|1><tab><string>")
        items.append((inp[1] if len(inp) > 1 else "", inp[0] == "1"))

    util.perform_action_on_each_line_of_file(
        file_handle=util.get_file_handle(sampleFile),
        action=action,
        transformation=util.default_tab_seppd)
    if alphabet is None:
        symbols = sorted(set("".join(x[0] for x in items)))
        alphabet = Alphabet(symbols) if len(symbols) > 0 else BINARY
    alphabet = as_alphabet(alphabet)
    if not alphabet.singleCharacter:
        items = [(tuple(x.split()), y) for (x, y) in items]
    return LabeledSample(alphabet, items,
                         OrderedDict([("source", sampleFile)]))
