import unittest
from collections import OrderedDict
from fractions import Fraction
import math
import fsmx
from fsmx.fsmxutil import util
from fsmx.automata.core import Alphabet, BINARY, dfa_equivalent,\
    single_state_dfa
from fsmx.automata import weighted
from fsmx.bench.tomita import tomita_dfa
from fsmx.training.core import LabeledSample
from fsmx.learning import reference
from fsmx.learning.reference import FiniteSupportLm, DpfaLm
import importlib
rpnimodule = importlib.import_module("fsmx.learning.rpni")
from fsmx.learning import srm
from fsmx.learning.srm import LearnerConfig, learn_srm
from fsmx.learning import mps
from fsmx.learning import zeta
import numpy as np


def tomita1_sample():
    dfa = tomita_dfa(1)
    items = []
    for w in BINARY.strings(6):
        items.extend([(w, dfa(w))]*(20 if dfa(w) else 1))
    return LabeledSample(BINARY, items)


class TestReferenceLms(unittest.TestCase):

    def test_finite_support(self):
        lm = FiniteSupportLm.uniform(BINARY, 2)
        self.assertEqual(lm.prob("01"), Fraction(1, 7))
        self.assertEqual(lm.prob("000"), 0)
        self.assertEqual(reference.most_probable_strings(lm, 3),
                         ["", "0", "1"])
        self.assertEqual(reference.most_probable_strings(lm, 2, ["0"]),
                         ["", "1"])
        with self.assertRaises(util.SupportExhaustedError):
            lm.mostProbable(8)
        empirical = FiniteSupportLm.fromSample(BINARY, ["0", "0", "1"])
        self.assertEqual(empirical.prob("0"), Fraction(2, 3))
        with self.assertRaises(ValueError):
            FiniteSupportLm(BINARY, {"0": 0.7, "1": 0.7})

    def test_dpfa_most_probable(self):
        lm = DpfaLm(weighted.halving_dpfa())
        top = lm.mostProbable(4)
        self.assertEqual([w for (w, p) in top], ["", "a", "aa", "aaa"])
        self.assertEqual([p for (w, p) in top],
                         [Fraction(1, 2), Fraction(1, 4), Fraction(1, 8),
                          Fraction(1, 16)])
        self.assertEqual(reference.most_probable_strings(lm, 2, [""]),
                         ["a", "aa"])

    def test_dpfa_ranks_by_probability(self):
        pfa = weighted.random_dpfa(3, BINARY, fsmx.get_random_state(1234))
        lm = DpfaLm(pfa)
        top = lm.mostProbable(10)
        probs = [float(p) for (w, p) in top]
        assert all(x >= y - 1e-12 for (x, y) in zip(probs, probs[1:]))
        #no string of length <= 4 outside the top 10 beats the 10th
        chosen = set(w for (w, p) in top)
        for w in BINARY.strings(4):
            if w not in chosen:
                assert pfa.weight(w) <= probs[-1] + 1e-12

    def test_dpfa_sample(self):
        lm = DpfaLm(weighted.halving_dpfa())
        randomState = fsmx.get_random_state(1234)
        lengths = [len(lm.sample(randomState)) for i in range(2000)]
        #geometric lengths with mean 1
        np.testing.assert_almost_equal(np.mean(lengths), 1.0, 1)
        assert reference.as_reference_lm(weighted.halving_dpfa()).prob("a")\
            == Fraction(1, 4)


class TestRpni(unittest.TestCase):

    def test_learns_tomita1_from_complete_sample(self):
        dfa = tomita_dfa(1)
        sample = [(w, dfa(w)) for w in BINARY.strings(4)]
        learned = rpnimodule.rpni(sample, BINARY)
        assert dfa_equivalent(learned, dfa)

    def test_consistent_with_sample(self):
        dfa = tomita_dfa(4)
        randomState = fsmx.get_random_state(1234)
        strings = [BINARY.decode(randomState.randint(2, size=length))
                   for length in randomState.randint(9, size=60)]
        sample = LabeledSample(BINARY, [(w, dfa(w)) for w in strings])
        learned = rpnimodule.rpni(sample)
        for (w, label) in sample:
            self.assertEqual(learned(w), label)

    def test_contradictions(self):
        with self.assertRaises(util.ContradictoryLabelsError):
            rpnimodule.rpni([("01", True), ("01", False)], BINARY)
        self.assertEqual(rpnimodule.majority_labels(
            [("0", True), ("0", False), ("1", True), ("1", True)]),
            [("0", False), ("1", True)])

    def test_prefix_tree_order(self):
        pta = rpnimodule.PrefixTreeAcceptor(BINARY, [("10", True),
                                                     ("0", False)])
        self.assertEqual(len(pta), 4)
        self.assertEqual(pta.labels, [None, False, None, True])


class TestSrm(unittest.TestCase):

    def test_objective(self):
        sample = [("0", False)]*100
        np.testing.assert_almost_equal(
            srm.srm_objective(single_state_dfa(BINARY), sample),
            math.sqrt(0.02), 4)
        self.assertEqual(srm.empirical_risk(tomita_dfa(1),
                                            [("1", True), ("0", True)]), 0.5)

    def test_bounds(self):
        np.testing.assert_almost_equal(
            srm.generalization_bound(100, 2, 0.05, 2),
            math.sqrt((4*(math.log(2) + 1) + math.log(20))/100))
        assert srm.generalization_bound(100, 2, 0.05, 2, weighted=True)\
            > srm.generalization_bound(100, 2, 0.05, 2)
        loose = srm.sample_size_bound(0.2, 0.05, 2)
        tight = srm.sample_size_bound(0.1, 0.05, 2)
        assert 1 < loose < tight

    def test_transition_tables(self):
        self.assertEqual(srm.table_count(3, 2), 729)
        tables = np.concatenate(list(srm.transition_tables(2, 2,
                                                           chunkSize=5)))
        self.assertEqual(tables.shape, (16, 2, 2))
        self.assertEqual(len(set(x.tobytes() for x in tables)), 16)
        np.testing.assert_array_equal(tables[0], np.zeros((2, 2)))
        np.testing.assert_array_equal(tables[-1], np.ones((2, 2)))

    def test_learns_tomita1(self):
        result = learn_srm(tomita1_sample(), LearnerConfig(sizeCap=3))
        assert dfa_equivalent(result.dfa, tomita_dfa(1))
        self.assertEqual(result.empiricalRisk, 0)
        self.assertEqual(result.m, 260)
        self.assertEqual([x["size"] for x in result.trace], [1, 2, 3])
        np.testing.assert_almost_equal(
            result.objective, srm.srm_penalty(2, 2, 260))

    def test_rpni_fallback(self):
        cfg = LearnerConfig(sizeCap=3, enumerationLimit=100)
        result = learn_srm(tomita1_sample(), cfg)
        assert dfa_equivalent(result.dfa, tomita_dfa(1))
        self.assertEqual(result.trace[-1]["source"], srm.RPNI)

    def test_config(self):
        with self.assertRaises(ValueError):
            LearnerConfig(C=0)
        cfg = LearnerConfig(C=0.5, sizeCap=2)
        self.assertEqual(LearnerConfig.fromJsonable(
            cfg.getJsonableObject()).getJsonableObject(),
            cfg.getJsonableObject())

    def test_calibrate_c(self):
        bestC, risks = srm.calibrate_c(candidates=(0.5, 1.0), numTasks=2,
                                       sampleSize=100, targetSize=2,
                                       sizeCap=2, maxLength=5, seed=1234)
        self.assertEqual(list(risks.keys()), [0.5, 1.0])
        assert bestC in risks
        self.assertEqual(risks[bestC], min(risks.values()))


class TestMostProbableStrings(unittest.TestCase):

    def test_query_count(self):
        self.assertEqual(mps.mps_query_count(2, 1.0, 0.1), (7, 3))
        with self.assertRaises(ValueError):
            mps.mps_query_count(2, 0, 0.1)

    def test_learns_parity(self):
        lm = DpfaLm(weighted.halving_dpfa())
        result = mps.learn_mps(lm, lambda w: len(w) % 2 == 0, 4)
        self.assertEqual(result.coveredMass, Fraction(15, 16))
        self.assertEqual(result.riskBound, Fraction(1, 16))
        self.assertEqual([x[0] for x in result.queries],
                         ["", "a", "aa", "aaa"])
        assert result.dfa("aaaa")
        assert not result.dfa("aaaaa")
        self.assertEqual(result.dfa.numStates, 2)

    def test_exhausted_support(self):
        lm = FiniteSupportLm.uniform(BINARY, 1)
        with self.assertRaises(util.SupportExhaustedError):
            mps.learn_mps(lm, lambda w: True, 4)


class TestZeta(unittest.TestCase):

    def setUp(self):
        self.lm = FiniteSupportLm.uniform(BINARY, 3)
        self.target = tomita_dfa(1)

    def test_expected_risk(self):
        self.assertEqual(zeta.expected_risk(single_state_dfa(BINARY),
                                            self.lm, self.target),
                         Fraction(4, 15))
        self.assertEqual(zeta.expected_risk(self.target, self.lm,
                                            self.target), 0)
        halving = DpfaLm(weighted.halving_dpfa())
        acceptAll = single_state_dfa(Alphabet(["a"])).complement()
        self.assertEqual(zeta.expected_risk(acceptAll, halving,
                                            lambda w: len(w) % 2 == 0),
                         Fraction(1, 3)*(1 - Fraction(1, 4096)))

    def test_best_risks_by_size(self):
        bySize = zeta.best_risks_by_size(self.lm, self.target, 3)
        self.assertEqual(bySize[1][0], Fraction(4, 15))
        self.assertEqual(bySize[2][0], 0)
        self.assertEqual(bySize[3][0], 0)

    def test_estimate_zeta(self):
        self.assertEqual(zeta.estimate_zeta(self.lm, self.target,
                                            Fraction(1, 10)), 2)
        self.assertEqual(zeta.estimate_zeta(self.lm, self.target,
                                            Fraction(1, 2)), 1)

    def test_oracle_verdicts(self):
        rejectAll = single_state_dfa(BINARY)
        assert zeta.oracle_verdict(self.target, self.lm, self.target, 0.1)
        assert not zeta.oracle_verdict(rejectAll, self.lm, self.target, 0.1)
        assert zeta.oracle_verdict(rejectAll, self.lm, self.target, 0.3)
        assert not zeta.oracle_verdict(rejectAll, self.lm, self.target,
                                       0.1, realizable=False, sizeCap=2)

    def test_guards(self):
        with self.assertRaises(util.GuardExceededError):
            zeta.best_risks_by_size(self.lm, self.target, 5)
        halving = DpfaLm(weighted.halving_dpfa())
        with self.assertRaises(util.UnsupportedModelError):
            zeta.best_risks_by_size(halving, lambda w: True, 2)
        with self.assertRaises(util.UnsupportedModelError):
            zeta.oracle_verdict(single_state_dfa(Alphabet(["a"])), halving,
                                lambda w: True, 0.1)
