import unittest
from fractions import Fraction
import os
import shutil
import tempfile
import fsmx
from fsmx.fsmxutil import util
from fsmx.automata.core import Alphabet, Dfa, BINARY
from fsmx.automata import weighted
from fsmx.bench.tomita import tomita_dfa
from fsmx.distances import finite
from fsmx.distances import reduction
from fsmx.distances.sat import SatFormula, read_dimacs, write_dimacs,\
    random_3cnf
import numpy as np
import itertools


def unsatisfiable_formula():
    return SatFormula(3, [[a*1, b*2, c*3] for (a, b, c)
                          in itertools.product([1, -1], repeat=3)])


def satisfiable_formula():
    return SatFormula(3, [[1, 2, 3], [-1, 2, 3]])


class TestFiniteDistances(unittest.TestCase):

    def test_dist_inf_finite(self):
        a = weighted.halving_dpfa()
        b = weighted.halving_dpfa(stop=Fraction(1, 4))
        self.assertEqual(finite.dist_inf_finite(a, b, 3),
                         (Fraction(1, 4), ""))
        self.assertEqual(finite.dist_inf_finite(a, a, 3)[0], 0)

    def test_dist_inf_to_scaled_copy(self):
        a = weighted.halving_dpfa()
        half = a.scaled(Fraction(1, 2))
        self.assertEqual(finite.dist_inf_finite(a, half, 0),
                         (Fraction(1, 4), ""))
        #the gap halves with every extra symbol
        self.assertEqual(finite.dist_inf_finite(a, half, 4),
                         (Fraction(1, 4), ""))

    def test_eq_finite(self):
        self.assertEqual(finite.eq_finite(tomita_dfa(1), tomita_dfa(2), 4),
                         "1")
        self.assertEqual(finite.eq_finite(tomita_dfa(4), tomita_dfa(4), 6),
                         None)
        #a membership function stands in for a model
        self.assertEqual(finite.eq_finite(tomita_dfa(5),
                                          lambda w: w.count("0") % 2 == 0,
                                          4, alphabet=BINARY), "1")

    def test_alphabet_mismatch(self):
        with self.assertRaises(util.AlphabetMismatchError):
            finite.eq_finite(tomita_dfa(1), weighted.halving_dpfa(), 2)

    def test_guard(self):
        with self.assertRaises(util.GuardExceededError):
            finite.check_guard(BINARY, 30)
        with self.assertRaises(util.GuardExceededError):
            finite.dist_inf_finite(tomita_dfa(1), tomita_dfa(2), 40)

    def test_tchebychev_enumeration(self):
        a = weighted.halving_dpfa()
        b = weighted.halving_dpfa(stop=Fraction(1, 4))
        same = finite.tchebychev_enumerate(a, a, 0.1)
        self.assertEqual(same.verdict, finite.NO)
        assert same.massA >= 0.9
        differ = finite.tchebychev_enumerate(a, b, 0.1)
        self.assertEqual(differ.verdict, finite.YES)
        self.assertEqual(differ.witness, "")
        capped = finite.tchebychev_enumerate(a, a, 1e-6, cap=5)
        self.assertEqual(capped.verdict, finite.INCONCLUSIVE)
        self.assertEqual(capped.examined, 5)
        with self.assertRaises(ValueError):
            finite.tchebychev_enumerate(a, b, 0)

    def test_model_mass(self):
        self.assertEqual(finite.model_mass(weighted.halving_dpfa(), 3),
                         Fraction(15, 16))
        lm = reduction.trivial_rnnlm(Fraction(1, 8))
        np.testing.assert_almost_equal(finite.model_mass(lm, 3),
                                       1 - (3/4.)**4)

    def test_cut_language_intersection(self):
        odd = Dfa(Alphabet(["a"]), [[1], [0]], 0, [1])
        halving = weighted.halving_dpfa()
        self.assertEqual(finite.cut_language_intersection(
            halving, odd, 0.2, 5), "a")
        self.assertEqual(finite.cut_language_intersection(
            halving, odd, 0.3, 5), None)

    def test_string_at(self):
        self.assertEqual([finite.string_at(BINARY, 2, i) for i in range(4)],
                         ["00", "01", "10", "11"])


class TestSatReduction(unittest.TestCase):

    def test_satisfiability(self):
        assert not unsatisfiable_formula().isSatisfiable()
        assert satisfiable_formula().isSatisfiable()
        self.assertEqual(satisfiable_formula().countSatisfied("000"), 1)
        self.assertEqual(satisfiable_formula().countSatisfied("0010"), 2)
        with self.assertRaises(ValueError):
            SatFormula(2, [[1, 2]])
        with self.assertRaises(ValueError):
            SatFormula(2, [[1, 2, 3]])

    def test_pfa_is_valid_and_matches_closed_form(self):
        epsilon = Fraction(1, 8)
        for formula in [satisfiable_formula(), unsatisfiable_formula()]:
            pfa = reduction.sat_to_pfa(formula, epsilon)
            assert pfa.exact
            assert pfa.validate()
            self.assertEqual(pfa.dim, 1 + 2*formula.k*formula.n)
            for w in BINARY.strings(5):
                self.assertEqual(pfa.weight(w),
                                 reduction.closed_form(formula, epsilon, w))

    def test_decide_sat(self):
        for epsilon in [Fraction(1, 8), Fraction(1, 5)]:
            for formula in [satisfiable_formula(), unsatisfiable_formula()]:
                self.assertEqual(reduction.decide_sat(formula, epsilon),
                                 formula.isSatisfiable())
        randomState = fsmx.get_random_state(1234)
        for i in range(5):
            formula = random_3cnf(4, 12, randomState)
            self.assertEqual(reduction.decide_sat(formula, Fraction(1, 10)),
                             formula.isSatisfiable())

    def test_closed_form_on_random_formulas(self):
        randomState = fsmx.get_random_state(1234)
        for i in range(20):
            n = randomState.randint(3, 7)
            formula = random_3cnf(n, randomState.randint(1, 9), randomState)
            epsilon = Fraction(1, int(randomState.choice([5, 8, 16])))
            pfa = reduction.sat_to_pfa(formula, epsilon)
            assert pfa.validate()
            for w in BINARY.strings(n + 1):
                self.assertEqual(pfa.weight(w),
                                 reduction.closed_form(formula, epsilon, w),
                                 repr(formula)+" on "+repr(w))

    def test_decide_sat_on_random_formulas(self):
        randomState = fsmx.get_random_state(1234)
        for i in range(20):
            formula = random_3cnf(randomState.randint(3, 11),
                                  randomState.randint(1, 9), randomState)
            satisfiable = formula.isSatisfiable()
            for epsilon in [Fraction(1, 8), Fraction(1, 16)]:
                self.assertEqual(reduction.decide_sat(formula, epsilon),
                                 satisfiable, repr(formula))

    def test_max_gap_and_threshold(self):
        bundle = reduction.ReductionBundle(satisfiable_formula(),
                                           Fraction(1, 8))
        gap, witness = bundle.maxGap()
        self.assertEqual(gap, Fraction(27, 1024))
        self.assertEqual(witness, "001")
        self.assertEqual(bundle.cEpsilon, Fraction(81, 4096))
        assert bundle.decide()
        distance = finite.dist_inf_finite(bundle.rnnlm, bundle.pfa, 3)[0]
        np.testing.assert_almost_equal(distance, float(gap), 12)

    def test_bundle_arguments(self):
        with self.assertRaises(ValueError):
            reduction.ReductionBundle(satisfiable_formula(), Fraction(1, 4))
        with self.assertRaises(ValueError):
            reduction.ReductionBundle(satisfiable_formula(), Fraction(1, 8),
                                      s=2)
        bundle = reduction.ReductionBundle(satisfiable_formula(),
                                           Fraction(1, 8), s=1)
        self.assertEqual(bundle.s, 1)

    def test_bundle_files(self):
        directory = tempfile.mkdtemp()
        try:
            bundle = reduction.ReductionBundle(satisfiable_formula(),
                                               Fraction(1, 8))
            bundle.write(directory)
            for name in ["pfa.json", "rnn.json", "meta.json"]:
                assert os.path.exists(os.path.join(directory, name))
            pfa = weighted.read_pfa_file(os.path.join(directory, "pfa.json"))
            self.assertEqual(pfa.weight("011"), bundle.pfaWeight("011"))
            meta = util.read_json(os.path.join(directory, "meta.json"))
            self.assertEqual(meta["c_eps"], "81/4096")
        finally:
            shutil.rmtree(directory)

    def test_dimacs(self):
        directory = tempfile.mkdtemp()
        try:
            fileName = os.path.join(directory, "f.cnf")
            formula = random_3cnf(5, 7, fsmx.get_random_state(1234))
            write_dimacs(fileName, formula)
            self.assertEqual(read_dimacs(fileName), formula)
            with open(fileName, "w") as fh:
                fh.write("c comment\np cnf 3 2\n1 -2 3 0\n-1 2\n3 0\n")
            self.assertEqual(read_dimacs(fileName),
                             SatFormula(3, [[1, -2, 3], [-1, 2, 3]]))
        finally:
            shutil.rmtree(directory)

    def test_random_formula_uses_distinct_atoms(self):
        formula = random_3cnf(6, 20, fsmx.get_random_state(1234))
        self.assertEqual(formula.k, 20)
        for clause in formula.clauses:
            self.assertEqual(len(set(abs(x) for x in clause)), 3)
