import unittest
import csv
import os
import shutil
import tempfile
from fsmx.automata.core import BINARY
from fsmx.bench.tomita import tomita_dfa
from fsmx.bench import metrics
from fsmx.bench import runner
from fsmx.bench.runner import ExperimentSpec, ExperimentRecord,\
    BenchmarkResult
from fsmx.extraction.core import ExtractionConfig, QUANTIZATION,\
    CLUSTERING, LSTAR
from fsmx.training.trainer import TrainConfig
import numpy as np


def small_spec(**kwargs):
    settings = dict(grammars=(1,), cells=(("gru", None),), dims=(3,),
                    runs=2)
    settings.update(kwargs)
    return ExperimentSpec(**settings)


def hand_built_records():
    return [
        ExperimentRecord(1, "gru", 3, QUANTIZATION, 0, 10.0, True, 1.0, 0.9,
                         2, True),
        ExperimentRecord(1, "gru", 3, QUANTIZATION, 1, 50.0, False, None,
                         None, 100, False, aborted="too many cells"),
        #its RNN missed the gates, so it is left out of the tables
        ExperimentRecord(1, "gru", 3, QUANTIZATION, 2, 99.0, True, 0.1, 0.1,
                         7, True, gatePassed=False)]


class TestMetrics(unittest.TestCase):

    def test_success_percentage(self):
        self.assertEqual(metrics.success_percentage([True, False]), 50.0)
        self.assertEqual(metrics.success_percentage([True]*3), 100.0)
        with self.assertRaises(ValueError):
            metrics.success_percentage([])

    def test_success_rate_groups(self):
        rates = metrics.success_rate(hand_built_records())
        self.assertEqual(list(rates.items()),
                         [(("gru", 3, 1, QUANTIZATION), 200/3.)])

    def test_gen_accuracy(self):
        self.assertEqual(metrics.gen_accuracy(tomita_dfa(4), tomita_dfa(4),
                                              6, sampleSize=None), 1.0)
        np.testing.assert_almost_equal(
            metrics.gen_accuracy(tomita_dfa(1), tomita_dfa(2), 2,
                                 sampleSize=None), 4/7.)
        sampled = metrics.gen_accuracy(tomita_dfa(1), tomita_dfa(2), 8,
                                       sampleSize=200, seed=1234)
        assert 0 <= sampled <= 1


class TestRunner(unittest.TestCase):

    def test_spec(self):
        spec = small_spec(seed=10)
        tasks = spec.tasks()
        self.assertEqual(len(tasks), 2)
        self.assertEqual([x[5] for x in tasks], [10, 11])
        back = ExperimentSpec.fromJsonable(spec.getJsonableObject())
        self.assertEqual(back.getJsonableObject(), spec.getJsonableObject())
        with self.assertRaises(ValueError):
            small_spec(methods=("guessing",))
        with self.assertRaises(ValueError):
            small_spec(runs=0)
        with self.assertRaises(ValueError):
            small_spec(cells=(("third-order", None),))

    def test_presets(self):
        desk = runner.PRESETS["desk"]()
        self.assertEqual(desk.grammars, (1, 4, 7))
        self.assertEqual(desk.dims, (20,))
        self.assertEqual(desk.runs, 5)
        full = runner.PRESETS["full"](runs=1)
        self.assertEqual(full.dims, (50, 100, 150))
        self.assertEqual(len(full.cells), 6)
        self.assertEqual(full.runs, 1)

    def test_aggregates(self):
        result = BenchmarkResult(small_spec(), hand_built_records())
        tables = result.aggregates()
        self.assertEqual(list(tables.keys()), list(runner.TABLES))
        key = ("gru", 3, 1)
        self.assertEqual(tables["success"][key], [50.0, None, None])
        self.assertEqual(tables["runtime_ms"][key], [10.0, None, None])
        self.assertEqual(tables["gen_acc_large"][key], [0.9, None, None])
        self.assertEqual(tables["size"][key], [2.0, None, None])

    def test_written_tables(self):
        directory = tempfile.mkdtemp()
        try:
            result = BenchmarkResult(small_spec(), hand_built_records())
            result.write(directory, omitTiming=True)
            with open(os.path.join(directory, "records.csv")) as fh:
                rows = list(csv.reader(fh))
            self.assertEqual(rows[0], list(runner.CSV_COLUMNS))
            self.assertEqual(len(rows), 4)
            self.assertEqual(rows[2][7], runner.MISSING)
            with open(os.path.join(directory, "aggregate.csv")) as fh:
                rows = list(csv.reader(fh))
            self.assertEqual(rows[0], ["table", "cell", "dim", "G1"])
            self.assertEqual(rows[1], ["runtime_ms", "gru", "3",
                                       "[0.0,-,-]"])
            self.assertEqual(rows[2], ["success", "gru", "3",
                                       "[50.0,-,-]"])
            methods, groups, values = runner.read_plot_data(
                os.path.join(directory, "size.tsv"))
            self.assertEqual(methods, [QUANTIZATION, CLUSTERING, LSTAR])
            self.assertEqual(groups, ["gru/3/G1"])
            self.assertEqual(values[0, 0], 2.0)
            assert np.isnan(values[0, 1])
            for table in runner.TABLES:
                assert os.path.exists(os.path.join(directory, table+".png"))
        finally:
            shutil.rmtree(directory)

    def test_small_benchmark(self):
        spec = ExperimentSpec(
            grammars=(1,), cells=(("first-order", "tanh"),), dims=(3,),
            methods=(QUANTIZATION, CLUSTERING), runs=1,
            training=TrainConfig(learningRate=0.05, epochs=2, maxRestarts=0),
            extraction=ExtractionConfig(clusters=4, budget=200, maxDepth=6),
            genSamples=50, seed=1234)
        result = runner.run_benchmark(spec, threads=1)
        self.assertEqual([x.method for x in result.records],
                         [QUANTIZATION, CLUSTERING])
        for record in result.records:
            self.assertEqual((record.grammar, record.cell, record.dim),
                             (1, "first-order-tanh", 3))
            assert record.aborted is None
            assert 1 <= record.size
            assert 0 <= record.genAccSmall <= 1
            assert 0 <= record.genAccLarge <= 1
            assert record.converged
