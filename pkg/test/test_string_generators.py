import unittest
from collections import defaultdict
import fsmx
from fsmx.automata.core import BINARY
from fsmx.bench.tomita import tomita_dfa
from fsmx.training.core import GenerateStringNTimes
from fsmx.training import stringgen
from fsmx.training.quantitygen import UniformSupportLengthGenerator
import numpy as np
from fsmx import random


class TestStringGenerators(unittest.TestCase):

    def test_fixed_length_strings(self):
        generator = stringgen.RandomStringGenerator(
            BINARY, 5, randomState=fsmx.get_random_state(1234))
        strings = list(GenerateStringNTimes(generator, 50).generateStrings())
        assert all(len(w) == 5 for w in strings)
        self.assertEqual(generator.getJsonableObject()["length"],
                         "fixedQuantity-5")
        assert len(set(strings)) > 1

    def test_uniform_support_lengths(self):
        random.seed(1234)
        np.random.seed(1234)
        maxLength = 3
        generator = stringgen.UniformSupportStringGenerator(BINARY, maxLength)
        generated = list(GenerateStringNTimes(generator,
                                              20000).generateStrings())
        length_count = defaultdict(lambda: 0)
        for w in generated:
            assert len(w) <= maxLength
            length_count[len(w)] += 1
        #Σ^{≤3} has 15 strings, 2^l of them of length l
        for length in range(maxLength + 1):
            np.testing.assert_almost_equal(
                length_count[length]/float(len(generated)),
                2**length/15.0, 2)

    def test_uniform_support_strings(self):
        random.seed(1234)
        np.random.seed(1234)
        generator = stringgen.UniformSupportStringGenerator(BINARY, 2)
        string_count = defaultdict(lambda: 0)
        for i in range(7000):
            string_count[generator.generateString()] += 1
        self.assertEqual(sorted(string_count.keys()), sorted(BINARY.strings(2)))
        for w in BINARY.strings(2):
            np.testing.assert_almost_equal(string_count[w]/7000.0, 1/7.0, 1)

    def test_length_generator_respects_min_length(self):
        random.seed(1234)
        np.random.seed(1234)
        lengths = UniformSupportLengthGenerator(2, 6, minLength=4)
        drawn = set(lengths.generateQuantity() for i in range(200))
        self.assertEqual(drawn, set([4, 5, 6]))

    def test_class_conditional_strings_carry_label(self):
        randomState = fsmx.get_random_state(1234)
        dfa = tomita_dfa(4)
        for label in [True, False]:
            generator = stringgen.ClassConditionalStringGenerator(
                dfa, label, 8, randomState=randomState)
            assert generator.available()
            for i in range(200):
                w = generator.generateString()
                assert len(w) <= 8
                self.assertEqual(dfa(w), label)

    def test_class_conditional_is_uniform(self):
        randomState = fsmx.get_random_state(1234)
        #Tomita 1 accepts "", "1", "11" and "111" up to length 3
        generator = stringgen.ClassConditionalStringGenerator(
            tomita_dfa(1), True, 3, randomState=randomState)
        string_count = defaultdict(lambda: 0)
        for i in range(4000):
            string_count[generator.generateString()] += 1
        self.assertEqual(sorted(string_count.keys()),
                         ["", "1", "11", "111"])
        for w in string_count:
            np.testing.assert_almost_equal(string_count[w]/4000.0, 0.25, 1)

    def test_class_conditional_of_fixed_length(self):
        generator = stringgen.ClassConditionalStringGenerator(
            tomita_dfa(2), True, 6, randomState=fsmx.get_random_state(1234))
        self.assertEqual(generator.generateStringOfLength(4), "1010")
        self.assertEqual(generator.generateStringOfLength(3), None)
        self.assertEqual(generator.countOfLength(6), 1)

    def test_balanced_suffixes_alternate(self):
        dfa = tomita_dfa(1)
        generator = stringgen.BalancedSuffixGenerator(
            dfa, dfa.initial, 5, randomState=fsmx.get_random_state(1234))
        labels = [dfa(generator.generateString()) for i in range(10)]
        self.assertEqual(labels, [True, False]*5)
        #nothing is accepted after a 0
        dead = stringgen.BalancedSuffixGenerator(
            dfa, 1, 5, randomState=fsmx.get_random_state(1234))
        for i in range(10):
            assert not dfa("0" + dead.generateString())
