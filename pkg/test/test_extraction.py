import unittest
import sys
from io import StringIO
import fsmx
from fsmx.fsmxutil import util
from fsmx.automata.core import BINARY, dfa_equivalent
from fsmx.bench.tomita import tomita_dfa, TOMITA_IDS
from fsmx.rnn.cells import CellKind
from fsmx.rnn.model import build_model, recognizer_classify
from fsmx.extraction import core as extraction
from fsmx.extraction.core import ExtractionConfig
from fsmx.extraction import oracles
from fsmx.extraction.kmeans import kmeans
from fsmx.extraction.quantization import extract_quantization, grid_cell
from fsmx.extraction.clustering import extract_clustering
from fsmx.extraction import lstar
from fsmx.extraction.lstar import extract_lstar, ObservationTable
import numpy as np


class TestExtraction(unittest.TestCase):

    def test_every_method_recovers_a_dfa(self):
        for grammarId in TOMITA_IDS:
            dfa = tomita_dfa(grammarId)
            for method in extraction.METHODS:
                cfg = ExtractionConfig(method=method, seed=1234)
                result = extraction.extract(oracles.as_oracle(dfa), cfg)
                assert dfa_equivalent(result.dfa, dfa),\
                    method+" on grammar "+str(grammarId)
                self.assertEqual(result.dfa.numStates, dfa.numStates)
                self.assertEqual(result.method, method)

    def test_lstar_converges_on_a_dfa(self):
        result = extract_lstar(tomita_dfa(4), ExtractionConfig(seed=1234))
        assert result.converged
        assert result.membershipQueries > 0
        assert result.equivalenceQueries >= 1
        self.assertEqual(result.extra["hypothesisSizes"][-1], 4)

    def test_lstar_reports_states_it_cannot_split(self):
        model = build_model(CellKind.create("lstm"), BINARY, 2, std=0.5,
                            randomState=fsmx.get_random_state(1234))
        oracle = oracles.RnnOracle(model)
        run = lstar._LstarRun(oracle, ExtractionConfig(seed=1234))
        vector = oracle.run("01")
        #same h half, different memory cells
        other = np.array(vector, dtype=float)
        other[2:] += 0.5
        stderr = sys.stderr
        sys.stderr = StringIO()
        try:
            assert not run.refine(vector, other)
            assert "unsplit" in sys.stderr.getvalue()
        finally:
            sys.stderr = stderr
        self.assertEqual(run.unsplittable, 1)
        self.assertEqual(run.refinements, 0)
        result = extract_lstar(tomita_dfa(4), ExtractionConfig(seed=1234))
        self.assertEqual(result.extra["unsplittable"], 0)

    def test_embedded_rnn_simulates_dfa(self):
        dfa = tomita_dfa(5)
        model = oracles.embed_dfa_in_rnn(dfa)
        for w in BINARY.strings(8):
            self.assertEqual(recognizer_classify(model, w)[0], dfa(w))
        result = extract_quantization(model, ExtractionConfig(
            method=extraction.QUANTIZATION))
        assert dfa_equivalent(result.dfa, dfa)
        result = extract_lstar(model, ExtractionConfig(seed=1234))
        assert dfa_equivalent(result.dfa, dfa)

    def test_quantization_needs_bounded_states(self):
        model = build_model(CellKind.create("first-order", "relu"), BINARY,
                            3, randomState=fsmx.get_random_state(1234))
        with self.assertRaises(util.UnsupportedModelError):
            extract_quantization(model, ExtractionConfig(
                method=extraction.QUANTIZATION))

    def test_quantization_cell_cap(self):
        cfg = ExtractionConfig(method=extraction.QUANTIZATION, cellCap=2)
        with self.assertRaises(util.StateExplosionError) as context:
            extract_quantization(tomita_dfa(4), cfg)
        self.assertEqual(context.exception.partialSize, 2)

    def test_grid_cell(self):
        self.assertEqual(grid_cell([0.0, 0.49, 0.5, 1.0], 2), (0, 0, 1, 1))
        self.assertEqual(grid_cell([0.3], 3), (0,))

    def test_clustering_budget(self):
        with self.assertRaises(ValueError):
            extract_clustering(tomita_dfa(1), ExtractionConfig(
                method=extraction.CLUSTERING, clusters=10, budget=5))

    def test_clustering_lowers_k(self):
        result = extract_clustering(tomita_dfa(6), ExtractionConfig(
            method=extraction.CLUSTERING, clusters=10, seed=1234))
        self.assertEqual(result.extra["clusters"], 3)
        self.assertEqual(result.conflictsResolved, 0)

    def test_kmeans_separates_blobs(self):
        randomState = fsmx.get_random_state(1234)
        points = np.concatenate([randomState.normal(0.0, 0.1, (30, 2)),
                                 randomState.normal(5.0, 0.1, (30, 2))])
        result = kmeans(points, 2, seed=1234)
        self.assertEqual(len(set(result.assignment[:30])), 1)
        self.assertEqual(len(set(result.assignment[30:])), 1)
        self.assertNotEqual(result.assignment[0], result.assignment[30])
        np.testing.assert_almost_equal(
            sorted(result.centroids[:, 0]), [0.0, 5.0], 0)
        with self.assertRaises(ValueError):
            kmeans(points, 0)
        with self.assertRaises(ValueError):
            kmeans(points[:3], 4)

    def test_observation_table(self):
        dfa = tomita_dfa(2)
        table = ObservationTable(BINARY, lambda word: dfa("".join(word)))
        table.complete()
        assert table.isClosed() and table.isConsistent()
        table.addCounterexample(("1", "0"))
        table.complete()
        assert dfa_equivalent(table.hypothesis(), dfa)

    def test_result_record(self):
        cfg = ExtractionConfig(method=extraction.QUANTIZATION)
        result = extract_quantization(tomita_dfa(3), cfg)
        obj = result.getJsonableObject(omitTiming=True)
        self.assertEqual(obj["runtime_ms"], 0.0)
        self.assertEqual(obj["method"], extraction.QUANTIZATION)
        self.assertEqual(ExtractionConfig.fromJsonable(
            obj["config"]).getJsonableObject(), cfg.getJsonableObject())
        self.assertEqual(cfg.withMethod(extraction.LSTAR).method,
                         extraction.LSTAR)
