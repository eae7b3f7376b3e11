import unittest
from collections import OrderedDict
from fractions import Fraction
import os
import shutil
import tempfile
import fsmx
from fsmx.fsmxutil import util
import numpy as np
from fsmx import random


class TestBasics(unittest.TestCase):

    def test_random_state_is_reproducible(self):
        a = fsmx.get_random_state(7)
        b = fsmx.get_random_state(7)
        np.testing.assert_array_equal(a.randint(100, size=20),
                                      b.randint(100, size=20))
        assert 0 <= a.random() < 1

    def test_default_seed(self):
        a = fsmx.get_random_state()
        b = fsmx.get_random_state(fsmx.DEFAULT_SEED)
        self.assertEqual(a.randint(10**6), b.randint(10**6))

    def test_sample_from_probs_arr(self):
        random.seed(1234)
        np.random.seed(1234)
        counts = np.zeros(3)
        for i in range(3000):
            counts[util.sampleFromProbsArr([0.2, 0.3, 0.5])] += 1
        np.testing.assert_almost_equal(counts/counts.sum(), [0.2, 0.3, 0.5],
                                       1)

    def test_weight_formatting(self):
        self.assertEqual(util.format_weight(Fraction(3, 8)), "3/8")
        self.assertEqual(util.format_weight(Fraction(4, 2)), "2")
        self.assertEqual(util.parse_weight("3/8"), Fraction(3, 8))
        self.assertEqual(util.parse_weight("0.25"), 0.25)
        self.assertEqual(util.parse_rational("0.25"), Fraction(1, 4))
        with self.assertRaises(ValueError):
            util.parse_rational("one half")

    def test_exact_weight_arrays(self):
        nested = util.format_weight_array(
            np.array([[Fraction(1, 3), Fraction(2, 3)]], dtype=object))
        self.assertEqual(nested, [["1/3", "2/3"]])
        parsed = util.parse_weight_array(nested, exact=True)
        self.assertEqual(parsed[0, 0], Fraction(1, 3))
        floats = util.parse_weight_array(nested)
        np.testing.assert_almost_equal(floats, [[1/3., 2/3.]])

    def test_json_files(self):
        directory = tempfile.mkdtemp()
        try:
            fileName = os.path.join(directory, "obj.json")
            obj = OrderedDict([("b", 1), ("a", [1, 2])])
            util.write_json(fileName, obj)
            back = util.read_json(fileName)
            self.assertEqual(list(back.keys()), ["b", "a"])
            self.assertEqual(back["a"], [1, 2])
        finally:
            shutil.rmtree(directory)

    def test_file_name_parts(self):
        parts = util.get_file_name_parts("some/dir/data.tsv")
        self.assertEqual(parts.core_file_name, "data")
        self.assertEqual(parts.get_transformed_file_path(
                            lambda x: x+"_info", extension=".txt"),
                         "some/dir/data_info.txt")

    def test_thread_count(self):
        old = os.environ.get("FSMX_THREADS")
        try:
            os.environ["FSMX_THREADS"] = "3"
            self.assertEqual(util.get_thread_count(), 3)
            del os.environ["FSMX_THREADS"]
            self.assertEqual(util.get_thread_count(), 1)
        finally:
            if old is not None:
                os.environ["FSMX_THREADS"] = old

    def test_error_hierarchy(self):
        error = util.StateExplosionError("too many", 12)
        assert isinstance(error, util.FsmxError)
        self.assertEqual(error.partialSize, 12)
