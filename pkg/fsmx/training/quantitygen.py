from __future__ import absolute_import, division, print_function
from collections import OrderedDict
import numpy as np
from fsmx.training.core import DefaultNameMixin


def _random_state(randomState):
    if randomState is None:
        from fsmx import random as randomState
    return randomState


class AbstractQuantityGenerator(DefaultNameMixin):
    """Class for sampling values from a distribution.

    Arguments:
        randomState: ``numpy.random.RandomState`` used for sampling;
    defaults to ``fsmx.random``

        name: see :class:`.DefaultNameMixin`.
    """

    def __init__(self, randomState=None, name=None):
        self.randomState = _random_state(randomState)
        super(AbstractQuantityGenerator, self).__init__(name)

    def generateQuantity(self):
        """Sample a quantity from a distribution.

        Returns:
            The sampled value.
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


class ChooseValueFromASet(AbstractQuantityGenerator):
    """Randomly samples a particular value from a set of values.

    Arguments:
        setOfPossibleValues: array of values that will be randomly sampled
    from.

        probs: optional array of probabilities, one per value; uniform
    if not given.

        See superclass for the rest.
    """

    def __init__(self, setOfPossibleValues, probs=None, randomState=None,
                 name=None):
        self.setOfPossibleValues = list(setOfPossibleValues)
        if probs is not None:
            probs = np.array(probs, dtype=float)
            assert len(probs) == len(self.setOfPossibleValues)
            probs = probs/probs.sum()
        self.probs = probs
        super(ChooseValueFromASet, self).__init__(randomState, name)

    def generateQuantity(self):
        """See superclass.
        """
        if self.probs is None:
            idx = self.randomState.randint(len(self.setOfPossibleValues))
        else:
            idx = self.randomState.choice(len(self.setOfPossibleValues),
                                          p=self.probs)
        return self.setOfPossibleValues[idx]

    def getJsonableObject(self):
        """See superclass.
        """
        return OrderedDict([("class", "ChooseValueFromASet"),
                            ("possibleValues", self.setOfPossibleValues),
                            ("probs", None if self.probs is None
                             else [float(x) for x in self.probs])])


class UniformIntegerGenerator(AbstractQuantityGenerator):
    """Randomly samples an integer from minVal to maxVal, inclusive.

    Arguments:
        minVal: minimum integer that can be sampled

        maxVal: maximum integers that can be sampled

        See superclass for the rest.
    """

    def __init__(self, minVal, maxVal, randomState=None, name=None):
        assert minVal <= maxVal
        self.minVal = minVal
        self.maxVal = maxVal
        super(UniformIntegerGenerator, self).__init__(randomState, name)

    def generateQuantity(self):
        """See superclass.
        """
        # the +1 makes the max val inclusive
        return int(self.randomState.randint(self.minVal, self.maxVal + 1))

    def getJsonableObject(self):
        """See superclass.
        """
        return OrderedDict([("class", "UniformIntegerGenerator"),
                            ("minVal", self.minVal), ("maxVal", self.maxVal)])


class FixedQuantityGenerator(AbstractQuantityGenerator):
    """Returns a fixed number every time generateQuantity is called.

    Arguments:
        quantity: the value to return when generateQuantity is called.
    """

    def __init__(self, quantity, name=None):
        self.quantity = quantity
        super(FixedQuantityGenerator, self).__init__(None, name)

    def generateQuantity(self):
        """See superclass.
        """
        return self.quantity

    def getJsonableObject(self):
        """See superclass.
        """
        return "fixedQuantity-" + str(self.quantity)


class UniformSupportLengthGenerator(ChooseValueFromASet):
    """Length of a string drawn uniformly from Σ^{≤maxLength}.

    Length l is chosen with probability |Σ|^l / |Σ^{≤maxLength}|.

    Arguments:
        alphabetSize: |Σ|

        maxLength: longest length

        minLength: shortest length (default 0)
    """

    def __init__(self, alphabetSize, maxLength, minLength=0,
                 randomState=None, name=None):
        self.alphabetSize = alphabetSize
        self.maxLength = maxLength
        self.minLength = minLength
        lengths = list(range(minLength, maxLength + 1))
        # normalise against the largest term to stay in float range
        probs = [float(alphabetSize)**(l - maxLength) for l in lengths]
        super(UniformSupportLengthGenerator, self).__init__(
            lengths, probs=probs, randomState=randomState, name=name)

    def getJsonableObject(self):
        """See superclass.
        """
        return OrderedDict([("class", "UniformSupportLengthGenerator"),
                            ("alphabetSize", self.alphabetSize),
                            ("minLength", self.minLength),
                            ("maxLength", self.maxLength)])
