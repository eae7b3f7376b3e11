from __future__ import absolute_import, division, print_function
from collections import OrderedDict
from fractions import Fraction
import re
import gzip
import os
import sys
import json
from fsmx import random
import numpy as np


class FsmxError(RuntimeError):
    """Base class of the domain errors raised by fsmx operations.
    """
    pass


class RejectedInputError(FsmxError):
    pass


class AlphabetMismatchError(FsmxError):
    pass


class ShapeMismatchError(FsmxError):
    pass


class UnsupportedModelError(FsmxError):
    pass


class DiagnosticUnavailableError(FsmxError):
    pass


class GuardExceededError(FsmxError):
    pass


class StateExplosionError(FsmxError):
    """Raised when an extraction produces more states than allowed.

    Arguments:
        partialSize: number of states discovered before aborting
    """

    def __init__(self, message, partialSize):
        super(StateExplosionError, self).__init__(message)
        self.partialSize = partialSize


class UnsatisfiableRatioError(FsmxError):
    pass


class ContradictoryLabelsError(FsmxError):
    pass


class SupportExhaustedError(FsmxError):
    pass


def printWarning(message):
    print("warning: " + message, file=sys.stderr)


def sampleFromProbsArr(arrWithProbs, randomState=None):
    """Samples from a discrete distribution.

    Arguments:
        arrWithProbs: array of probabilities

        randomState: optional ``numpy.random.RandomState``; defaults to
    ``fsmx.random``

    Returns:
        an index, sampled with the probability of that index in
    array of probabilities.
    """
    randomState = random if randomState is None else randomState
    arrWithProbs = np.array(arrWithProbs, dtype=float)
    return randomState.choice(len(arrWithProbs),
                              p=arrWithProbs/arrWithProbs.sum())


def get_file_handle(filename, mode="r"):
    """
    Retrieve an open file handle
    WARNING: must close file handle returned from this function
    :param filename: str, path to file
    :param mode: char, 'r'=read; 'w'=write, etc according `open`
    :return: open file handle
    """
    if (re.search('.gz$',filename) or re.search('.gzip',filename)):
        if (mode=="r"):
            mode="rt"
        elif (mode=="w"):
            if os.path.isfile(filename):
                os.remove(filename)
            mode="wt"
        return gzip.open(filename,mode)
    else:
        return open(filename,mode)


def default_tab_seppd(s):
    s = trim_newline(s)
    s = s.split("\t")
    return s


def trim_newline(s):
    return s.rstrip('\r\n')


def perform_action_on_each_line_of_file(
    file_handle, action, transformation=default_tab_seppd, ignore_input_title=False):
    """
    Read file and perform action on each line
    :param file_handle: file, file handle
    :param action: function handle, what to do with line
    :param transformation: function handle, manipulate line before action
    :param ignore_input_title: bool, skip index 0
    :return:
    """

    i = 0
    for line in file_handle:
        i += 1
        if hasattr(line, "decode"):
            line = line.decode("utf-8")
        if i > 1 or (ignore_input_title is False):
            action(transformation(line), i)

    file_handle.close()


def get_file_name_parts(file_name):
    """
    Extract filename components with regex
    :param file_name: a unix file path
    :return:
    """
    p = re.compile(r"^(.*/)?([^\./]+)(\.[^/]*)?$")
    m = p.search(file_name)
    return FileNameParts(m.group(1), m.group(2), m.group(3))


class FileNameParts(object):
    """
    Warning: this will break for non-unix systems;
    wrapper on filename for manipulating file names
    """

    def __init__(self, directory, core_file_name, extension):
        self.directory = directory if (directory is not None) else os.getcwd()
        self.core_file_name = core_file_name
        self.extension = extension

    def get_transformed_core_file_name(self, transformation, extension=None):
        to_return = transformation(self.core_file_name)
        if (extension is not None):
            to_return = to_return + extension
        else:
            if (self.extension is not None):
                to_return = to_return + self.extension
        return to_return

    def get_transformed_file_path(self, transformation, extension=None):
        return os.path.join(self.directory,
                            self.get_transformed_core_file_name(
                                transformation, extension=extension))


def format_as_json(jsonable_data):
    return json.dumps(jsonable_data, indent=4, separators=(',', ': '))


def write_json(fileName, jsonable_data):
    ofh = get_file_handle(fileName, 'w')
    ofh.write(format_as_json(jsonable_data) + "\n")
    ofh.close()


def read_json(fileName):
    fh = get_file_handle(fileName)
    obj = json.load(fh, object_pairs_hook=OrderedDict)
    fh.close()
    return obj


def format_weight(val):
    """Decimal-string form of a weight.

    Exact rationals become ``"p/q"``; floats use their shortest
    round-trip representation.
    """
    if isinstance(val, Fraction):
        if val.denominator == 1:
            return str(val.numerator)
        return str(val.numerator) + "/" + str(val.denominator)
    if isinstance(val, (int, np.integer)):
        return str(int(val))
    return repr(float(val))


def parse_weight(string):
    """Inverse of :func:`format_weight`; ``"p/q"`` gives a Fraction.
    """
    string = str(string).strip()
    if "/" in string:
        return parse_rational(string)
    return float(string)


def parse_rational(string):
    """Parse a ``"p/q"`` or decimal string into an exact Fraction.
    """
    try:
        return Fraction(str(string).strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError("Not a rational: " + str(string))


def format_weight_array(arr):
    arr = np.asarray(arr)
    if arr.ndim == 0:
        return format_weight(arr.item())
    return [format_weight_array(x) for x in arr]


def parse_weight_array(nested, exact=False):
    """Turn nested lists of weight strings back into an array.

    Arguments:
        exact: keep Fractions in an object array instead of
    converting to float64
    """
    def parse(x):
        if isinstance(x, list):
            return [parse(y) for y in x]
        val = parse_weight(x)
        return (Fraction(val) if exact else float(val))
    parsed = parse(nested)
    if exact:
        return np.array(parsed, dtype=object)
    return np.array(parsed, dtype=float)


def get_thread_count(default=1):
    """Worker cap from the FSMX_THREADS environment variable.
    """
    val = os.environ.get("FSMX_THREADS")
    if val is None or val.strip() == "":
        return default
    try:
        count = int(val)
    except ValueError:
        raise ValueError("FSMX_THREADS must be an integer, got " + val)
    return max(1, count)
