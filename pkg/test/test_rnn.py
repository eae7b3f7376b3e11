import unittest
from collections import OrderedDict
from fractions import Fraction
import os
import shutil
import tempfile
import fsmx
from fsmx.fsmxutil import util
from fsmx.automata.core import BINARY
from fsmx.rnn.cells import CellKind
from fsmx.rnn import model as rnnmodel
from fsmx.rnn.model import RECOGNIZER, LM, build_model, zero_model
from fsmx.rnn import diagnostics
from fsmx.distances.reduction import trivial_rnnlm, trivial_weight
import numpy as np
from scipy.special import expit


class TestCells(unittest.TestCase):

    def test_names(self):
        self.assertEqual(CellKind.create("first-order", "tanh").name,
                         "first-order-tanh")
        self.assertEqual(CellKind.create("lstm").name, "lstm")
        with self.assertRaises(ValueError):
            CellKind.create("third-order")
        with self.assertRaises(ValueError):
            CellKind.create("first-order", "softsign")

    def test_shapes(self):
        randomState = fsmx.get_random_state(1234)
        #variant -> (state size, embedding size) at hidden size 4
        shapes = OrderedDict([
            ("first-order", (4, 4)), ("second-order", (4, 2)),
            ("lstm", (8, 2)), ("gru", (4, 2))])
        for variant, (stateSize, embeddingDim) in shapes.items():
            model = build_model(CellKind.create(variant), BINARY, 4,
                                randomState=randomState)
            self.assertEqual(model.stateSize, stateSize)
            self.assertEqual(model.embeddingDim, embeddingDim)
            self.assertEqual(model.initialState().shape, (stateSize,))
        second = build_model("second-order", BINARY, 4,
                             randomState=randomState)
        np.testing.assert_array_equal(second.weights["B"], np.eye(2))

    def test_first_order_step(self):
        randomState = fsmx.get_random_state(1234)
        model = build_model(CellKind.create("first-order", "sigmoid"),
                            BINARY, 3, randomState=randomState, std=1.0)
        h = randomState.uniform(size=3)
        weights = model.weights
        expected = expit(weights["W"].dot(h) + weights["B"][1]
                         + weights["c"])
        np.testing.assert_almost_equal(rnnmodel.step(model, h, "1"),
                                       expected)

    def test_second_order_step(self):
        randomState = fsmx.get_random_state(1234)
        model = build_model(CellKind.create("second-order", "tanh"),
                            BINARY, 3, randomState=randomState, std=1.0)
        h = randomState.uniform(size=3)
        weights = model.weights
        expected = np.tanh(weights["W"][:, :, 0].dot(h) + weights["c"])
        np.testing.assert_almost_equal(model.step(h, "0"), expected)

    def test_step_rejects_bad_input(self):
        model = build_model("gru", BINARY, 3,
                            randomState=fsmx.get_random_state(1234))
        with self.assertRaises(util.ShapeMismatchError):
            model.step(np.zeros(4), "0")
        with self.assertRaises(util.RejectedInputError):
            model.step(np.zeros(3), "2")

    def test_lstm_keeps_cell_state(self):
        model = build_model("lstm", BINARY, 3,
                            randomState=fsmx.get_random_state(1234))
        state = model.run("0110")
        self.assertEqual(state.shape, (6,))
        np.testing.assert_array_equal(model.hidden(state), state[:3])


class TestHeads(unittest.TestCase):

    def test_half_confidence_rejects(self):
        model = zero_model(CellKind.create("first-order", "tanh"), BINARY, 2)
        accepted, conf = rnnmodel.recognizer_classify(model, "0101")
        self.assertEqual(conf, 0.5)
        assert not accepted

    def test_softmax2(self):
        np.testing.assert_almost_equal(rnnmodel.softmax2([1.0, 0.0]),
                                       [2/3., 1/3.])
        probs = rnnmodel.softmax2([1000.0, 999.0, 0.0])
        np.testing.assert_almost_equal(probs.sum(), 1.0)

    def test_softmax2_on_random_vectors(self):
        randomState = fsmx.get_random_state(1234)
        for i in range(1000):
            x = randomState.uniform(-50, 50, size=randomState.randint(2, 7))
            probs = rnnmodel.softmax2(x)
            assert np.all(probs > 0)
            assert abs(probs.sum() - 1.0) <= 1e-12
            np.testing.assert_allclose(
                rnnmodel.softmax2(x + randomState.uniform(-100, 100)),
                probs, rtol=1e-9, atol=1e-15)
            np.testing.assert_allclose(probs, 2**x/np.sum(2**x), rtol=1e-9)

    def test_lm_weight_of_trivial_model(self):
        for epsilon in [Fraction(1, 8), Fraction(1, 5)]:
            lm = trivial_rnnlm(epsilon)
            for w in ["", "0", "101", "1111"]:
                np.testing.assert_almost_equal(
                    rnnmodel.lm_weight(lm, w),
                    float(trivial_weight(epsilon, w)), 12)

    def test_lm_weights_sum_to_one(self):
        lm = build_model("gru", BINARY, 3, head=LM,
                         randomState=fsmx.get_random_state(1234), std=0.5)
        total = sum(rnnmodel.lm_weight(lm, w) for w in BINARY.strings(14))
        assert 0 < total <= 1.0 + 1e-9

    def test_head_mismatch(self):
        recognizer = zero_model("gru", BINARY, 2)
        with self.assertRaises(util.UnsupportedModelError):
            rnnmodel.lm_weight(recognizer, "0")
        lm = zero_model("gru", BINARY, 2, head=LM)
        with self.assertRaises(util.UnsupportedModelError):
            rnnmodel.recognizer_classify(lm, "0")

    def test_enc4(self):
        self.assertEqual(rnnmodel.enc4(""), 0)
        self.assertEqual(rnnmodel.enc4("1"), Fraction(1, 4))
        self.assertEqual(rnnmodel.enc4("01"), Fraction(1, 16))
        self.assertEqual(rnnmodel.enc4("11"), Fraction(5, 16))
        with self.assertRaises(util.RejectedInputError):
            rnnmodel.enc4("012")

    def test_model_file(self):
        directory = tempfile.mkdtemp()
        try:
            fileName = os.path.join(directory, "rnn.json")
            model = build_model(CellKind.create("second-order", "sigmoid"),
                                BINARY, 4,
                                randomState=fsmx.get_random_state(1234))
            rnnmodel.write_model_file(fileName, model)
            self.assertEqual(rnnmodel.read_model_file(fileName), model)
        finally:
            shutil.rmtree(directory)

    def test_wrong_weight_shapes(self):
        model = zero_model("gru", BINARY, 2)
        weights = OrderedDict(model.weights)
        weights["Wz"] = np.zeros((3, 3))
        with self.assertRaises(util.ShapeMismatchError):
            model.withWeights(weights)


class TestDiagnostics(unittest.TestCase):

    def contractive_model(self):
        model = zero_model(CellKind.create("first-order", "tanh"), BINARY, 3)
        weights = OrderedDict(model.weights)
        weights["W"] = 0.2*np.eye(3) + 0.1
        return model.withWeights(weights)

    def test_lipschitz_bound(self):
        model = self.contractive_model()
        bound, contractive = diagnostics.lipschitz_bound(model)
        np.testing.assert_almost_equal(
            bound, np.sqrt(np.sum((0.2*np.eye(3) + 0.1)**2)))
        assert contractive

    def test_empirical_below_bound(self):
        model = self.contractive_model()
        pairs = diagnostics.random_state_pairs(
            3, 50, fsmx.get_random_state(1234))
        bound = diagnostics.lipschitz_bound(model)[0]
        for symbol in BINARY:
            assert diagnostics.empirical_lipschitz(
                model, pairs, symbol) <= bound + 1e-12

    def test_empirical_below_bound_on_random_models(self):
        randomState = fsmx.get_random_state(1234)
        activations = ["relu", "tanh", "sigmoid"]
        for i in range(50):
            dim = randomState.randint(2, 7)
            model = build_model(
                CellKind.create("first-order", activations[i % 3]), BINARY,
                dim, randomState=randomState,
                std=randomState.uniform(0.1, 1.5))
            bound = diagnostics.lipschitz_bound(model)[0]
            pairs = diagnostics.random_state_pairs(dim, 1000, randomState)
            for symbol in BINARY:
                empirical = diagnostics.empirical_lipschitz(model, pairs,
                                                            symbol)
                assert empirical <= bound + 1e-9, (model.kind.name, empirical,
                                                   bound)

    def test_contraction_trace_shrinks(self):
        model = self.contractive_model()
        trace = diagnostics.contraction_trace(
            model, np.ones(3), -np.ones(3), "0", 10)
        self.assertEqual(len(trace), 11)
        assert np.all(np.diff(trace) <= 0)
        assert trace[-1] < 0.01

    def test_needs_first_order(self):
        model = zero_model("gru", BINARY, 2)
        with self.assertRaises(util.DiagnosticUnavailableError):
            diagnostics.lipschitz_bound(model)
