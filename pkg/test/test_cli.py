import unittest
from io import StringIO
import json
from fractions import Fraction
import os
import shutil
import sys
import tempfile
from fsmx import cli
from fsmx.fsmxutil import util
from fsmx.automata import core, weighted
from fsmx.automata.core import Alphabet, Dfa, BINARY
from fsmx.bench.tomita import tomita_dfa
from fsmx.training.core import read_sample_file, print_sample, LabeledSample


def run(argv):
    """main's return code and what it printed."""
    stdout = sys.stdout
    sys.stdout = StringIO()
    try:
        code = cli.main(argv)
        return code, sys.stdout.getvalue()
    finally:
        sys.stdout = stdout


class TestCli(unittest.TestCase):

    def setUp(self):
        self.directory = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.directory)

    def path(self, name):
        return os.path.join(self.directory, name)

    def write_dfa(self, name, dfa):
        core.write_dfa_file(self.path(name), dfa)
        return self.path(name)

    def write_tomita1_sample(self):
        dfa = tomita_dfa(1)
        items = []
        for w in BINARY.strings(6):
            items.extend([(w, dfa(w))]*(20 if dfa(w) else 1))
        print_sample(self.path("t1.tsv"), LabeledSample(BINARY, items))
        return self.path("t1.tsv")

    def test_usage(self):
        stderr = sys.stderr
        sys.stderr = StringIO()
        try:
            self.assertEqual(cli.main([]), 2)
        finally:
            sys.stderr = stderr

    def test_domain_errors_return_one(self):
        stderr = sys.stderr
        sys.stderr = StringIO()
        try:
            self.assertEqual(run(["minimize", self.path("missing.json")])[0],
                             1)
            self.assertEqual(run(["--out", self.directory, "gen-data"])[0], 1)
            assert "error:" in sys.stderr.getvalue()
        finally:
            sys.stderr = stderr

    def test_gen_data(self):
        code, _ = run(["--out", self.directory, "gen-data", "--grammar", "1",
                       "--size", "50", "--max-length", "8"])
        self.assertEqual(code, 0)
        assert os.path.exists(self.path("data_info.txt"))
        sample = read_sample_file(self.path("data.tsv"), BINARY)
        assert len(sample) >= 50
        self.assertEqual(sample.numPositives, len(sample) - sample.numPositives)
        for (w, label) in sample:
            self.assertEqual(label, tomita_dfa(1)(w))

    def test_train_then_extract(self):
        data = self.write_tomita1_sample()
        code, _ = run(["--out", self.directory, "train", "--data", data,
                       "--cell", "first-order", "--activation", "tanh",
                       "--dim", "3", "--epochs", "1"])
        self.assertEqual(code, 0)
        report = util.read_json(self.path("train.json"))
        assert 0 <= report["trainAccuracy"] <= 1
        code, _ = run(["--out", self.directory, "--omit-timing", "extract",
                       "--model", self.path("rnn.json"),
                       "--method", "clustering"])
        self.assertEqual(code, 0)
        result = util.read_json(self.path("extraction.json"))
        self.assertEqual(result["method"], "clustering")
        self.assertEqual(result["runtime_ms"], 0.0)

    def test_extract_from_dfa(self):
        dfaFile = self.write_dfa("t4.json", tomita_dfa(4))
        code, _ = run(["--out", self.directory, "extract", "--dfa", dfaFile,
                       "--method", "clustering"])
        self.assertEqual(code, 0)
        extracted = Dfa.fromJsonable(
            util.read_json(self.path("extraction.json"))["dfa"])
        assert core.dfa_equivalent(extracted, tomita_dfa(4))

    def test_minimize_and_equiv(self):
        bloated = self.write_dfa("bloated.json", Dfa(
            BINARY, [[2, 1], [2, 0], [2, 2], [0, 0]], 0, [0, 1, 3]))
        code, output = run(["minimize", bloated])
        self.assertEqual(code, 0)
        self.assertEqual(Dfa.fromJsonable(json.loads(output)), tomita_dfa(1))
        t1 = self.write_dfa("t1.json", tomita_dfa(1))
        t2 = self.write_dfa("t2.json", tomita_dfa(2))
        self.assertEqual(run(["equiv", t1, t2])[1], "counterexample\t1\n")
        self.assertEqual(run(["equiv", t1, bloated])[1], "equivalent\n")

    def test_distance(self):
        t1 = self.write_dfa("t1.json", tomita_dfa(1))
        t2 = self.write_dfa("t2.json", tomita_dfa(2))
        code, output = run(["distance", t1, t2, "--mode", "eq",
                            "--max-length", "4"])
        self.assertEqual(code, 0)
        values = json.loads(output)
        self.assertEqual(values["witness"], "1")
        assert not values["equal"]
        code, output = run(["--format", "csv", "distance", t1, t2,
                            "--mode", "eq", "--max-length", "4"])
        self.assertEqual(output.split("\n")[:2],
                         ["mode,equal,witness", "eq,False,1"])
        weighted.write_pfa_file(self.path("a.json"), weighted.halving_dpfa())
        weighted.write_pfa_file(self.path("b.json"), weighted.halving_dpfa(
            stop=Fraction(1, 4)))
        code, output = run(["distance", self.path("a.json"),
                            self.path("b.json"), "--max-length", "3"])
        values = json.loads(output)
        self.assertEqual(values["value"], "1/4")
        self.assertEqual(values["witness"], "")
        code, output = run(["distance", self.path("a.json"),
                            self.path("b.json"), "--mode", "tchebychev",
                            "--c", "1/10"])
        self.assertEqual(json.loads(output)["verdict"], "yes")

    def test_sat_commands(self):
        formulaFile = self.path("f.cnf")
        with open(formulaFile, "w") as fh:
            fh.write("p cnf 3 2\n1 2 3 0\n-1 2 3 0\n")
        code, output = run(["decide-sat", formulaFile, "--eps", "1/8"])
        self.assertEqual((code, output), (0, "SAT\n"))
        with open(formulaFile, "w") as fh:
            fh.write("p cnf 3 8\n")
            for a in [1, -1]:
                for b in [2, -2]:
                    for c in [3, -3]:
                        fh.write(str(a)+" "+str(b)+" "+str(c)+" 0\n")
        self.assertEqual(run(["decide-sat", formulaFile, "--eps", "1/8"])[1],
                         "UNSAT\n")
        bundleDir = self.path("bundle")
        code, _ = run(["--out", bundleDir, "reduce-sat", formulaFile,
                       "--eps", "1/8"])
        self.assertEqual(code, 0)
        for name in ["pfa.json", "rnn.json", "meta.json"]:
            assert os.path.exists(os.path.join(bundleDir, name))
        self.assertEqual(run(["decide-sat", formulaFile, "--eps", "1/4"])[0],
                         1)

    def test_learn_srm(self):
        data = self.write_tomita1_sample()
        code, output = run(["learn-srm", "--data", data, "--cap", "3"])
        self.assertEqual(code, 0)
        report = json.loads(output)
        self.assertEqual(report["m"], 260)
        learned = Dfa.fromJsonable(report["returned_dfa"])
        assert core.dfa_equivalent(learned, tomita_dfa(1))
        assert report["bound_values"]["generalization_weighted"]\
            > report["bound_values"]["generalization"]

    def test_learn_mps(self):
        weighted.write_pfa_file(self.path("h.json"), weighted.halving_dpfa())
        even = self.write_dfa("even.json",
                              Dfa(Alphabet(["a"]), [[1], [0]], 0, [0]))
        code, output = run(["learn-mps", "--pfa", self.path("h.json"),
                            "--dfa", even, "--queries", "4"])
        self.assertEqual(code, 0)
        report = json.loads(output)
        self.assertEqual(report["covered_mass"], 0.9375)
        self.assertEqual(report["L_P"], 0.0)

    def test_bounds(self):
        code, output = run(["bounds", "--m", "100", "--n", "2"])
        self.assertEqual(code, 0)
        self.assertEqual(list(json.loads(output).keys()),
                         ["generalization", "generalization_weighted"])
        code, output = run(["--format", "csv", "bounds", "--eps", "0.1"])
        lines = output.split("\n")
        self.assertEqual(lines[0], "m")
        assert int(lines[1]) > 1
