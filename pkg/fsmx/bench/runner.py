from __future__ import absolute_import, division, print_function
from collections import OrderedDict
import csv
import multiprocessing
import os
import numpy as np
import fsmx
from fsmx.fsmxutil import util
from fsmx.automata.core import BINARY, dfa_equiv
from fsmx.rnn.cells import CellKind
from fsmx.rnn.model import build_model
from fsmx.training.datagen import (gen_dataset, gen_test_set,
                                   UNIFORM_UPSAMPLED)
from fsmx.training.trainer import TrainConfig, train
from fsmx.extraction.core import (ExtractionConfig, Stopwatch, extract,
                                  METHODS)
from fsmx.extraction.oracles import RnnOracle
from fsmx.bench.tomita import tomita_dfa, tomita_dataset_spec, SETTINGS
from fsmx.bench.metrics import (success_percentage, gen_accuracy,
                                GEN_SAMPLE_SIZE)

CSV_COLUMNS = ("grammar", "cell", "dim", "method", "run", "runtime_ms",
               "success", "gen_acc_small", "gen_acc_large", "size",
               "converged")
TABLES = ("runtime_ms", "success", "gen_acc_large", "size")
MISSING = "-"

FULL_CELLS = (("first-order", "sigmoid"), ("first-order", "tanh"),
               ("second-order", "sigmoid"), ("second-order", "tanh"),
               ("lstm", None), ("gru", None))
DESK_CELLS = (("second-order", "sigmoid"), ("gru", None))


class ExperimentSpec(object):
    """A benchmark grid: every grammar x cell x hidden size x run
    trains one recognizer and extracts from it with every method.

    Arguments:
        grammars: Tomita ids

        cells: (variant, activation) pairs

        dims: hidden sizes

        methods: extraction methods

        runs: trainings per grid cell

        extraction: :class:`.ExtractionConfig` shared by the methods

        training: :class:`.TrainConfig`

        datasetStrategy: sampling strategy of the training sets

        largeSupportOffset: the second generalization support is the
    grammar's support length plus this

        genSamples: strings drawn per generalization estimate

        seed: base seed; each training run gets its own
    """

    def __init__(self, grammars=(1, 4, 7), cells=DESK_CELLS, dims=(20,),
                 methods=METHODS, runs=5, extraction=None, training=None,
                 datasetStrategy=UNIFORM_UPSAMPLED, largeSupportOffset=10,
                 genSamples=GEN_SAMPLE_SIZE, seed=fsmx.DEFAULT_SEED):
        if runs < 1:
            raise ValueError("runs must be at least 1")
        for method in methods:
            if method not in METHODS:
                raise ValueError("Unknown extraction method "+str(method))
        self.grammars = tuple(grammars)
        self.cells = tuple((x[0], x[1]) for x in cells)
        for (variant, activation) in self.cells:
            CellKind.create(variant, activation)
        self.dims = tuple(dims)
        self.methods = tuple(methods)
        self.runs = runs
        self.extraction = (ExtractionConfig() if extraction is None
                           else extraction)
        self.training = TrainConfig() if training is None else training
        self.datasetStrategy = datasetStrategy
        self.largeSupportOffset = largeSupportOffset
        self.genSamples = genSamples
        self.seed = seed

    def tasks(self):
        """One tuple per training run, each with its own seed."""
        tasks = []
        for grammar in self.grammars:
            for cell in self.cells:
                for dim in self.dims:
                    for run in range(self.runs):
                        tasks.append((self, grammar, cell, dim, run,
                                      self.seed + len(tasks)))
        return tasks

    def getJsonableObject(self):
        return OrderedDict([
            ("grammars", list(self.grammars)),
            ("cells", [list(x) for x in self.cells]),
            ("dims", list(self.dims)),
            ("methods", list(self.methods)),
            ("runs", self.runs),
            ("extraction", self.extraction.getJsonableObject()),
            ("training", self.training.getJsonableObject()),
            ("datasetStrategy", self.datasetStrategy),
            ("largeSupportOffset", self.largeSupportOffset),
            ("genSamples", self.genSamples),
            ("seed", self.seed)])

    @classmethod
    def fromJsonable(cls, obj):
        obj = OrderedDict(obj)
        if "extraction" in obj:
            obj["extraction"] = ExtractionConfig.fromJsonable(
                obj["extraction"])
        if "training" in obj:
            obj["training"] = TrainConfig.fromJsonable(obj["training"])
        return cls(**obj)


def desk_spec(**kwargs):
    """Small grid: hidden size 20, grammars 1, 4 and 7, five runs."""
    return ExperimentSpec(**kwargs)


def full_spec(**kwargs):
    """Full grid: four simple cell classes plus LSTM and GRU at hidden
    sizes 50, 100 and 150.
    """
    settings = OrderedDict([("cells", FULL_CELLS), ("dims", (50, 100, 150))])
    settings.update(kwargs)
    return ExperimentSpec(**settings)


PRESETS = OrderedDict([("desk", desk_spec), ("full", full_spec)])


class ExperimentRecord(object):
    """One extraction run.

    Arguments:
        cell: cell name, e.g. ``"second-order-sigmoid"``

        runtimeMs: wall-clock time of the extraction alone

        success: the extracted DFA is equivalent to the grammar's

        genAccSmall, genAccLarge: agreement with the RNN on the
    training support and on the larger one (None when aborted)

        size: states of the extracted DFA (partial size when aborted)

        gatePassed: the RNN met both accuracy gates

        aborted: why extraction gave up, or None
    """

    def __init__(self, grammar, cell, dim, method, run, runtimeMs, success,
                 genAccSmall, genAccLarge, size, converged, gatePassed=True,
                 aborted=None):
        self.grammar = grammar
        self.cell = cell
        self.dim = dim
        self.method = method
        self.run = run
        self.runtimeMs = runtimeMs
        self.success = success
        self.genAccSmall = genAccSmall
        self.genAccLarge = genAccLarge
        self.size = size
        self.converged = converged
        self.gatePassed = gatePassed
        self.aborted = aborted

    def csvRow(self, omitTiming=False):
        fmt = lambda x: MISSING if x is None else repr(x)
        return [self.grammar, self.cell, self.dim, self.method, self.run,
                0.0 if omitTiming else round(self.runtimeMs, 3),
                int(self.success), fmt(self.genAccSmall),
                fmt(self.genAccLarge), self.size, int(self.converged)]

    def getJsonableObject(self, omitTiming=False):
        obj = OrderedDict(zip(CSV_COLUMNS, self.csvRow(omitTiming)))
        obj["gate_passed"] = self.gatePassed
        obj["aborted"] = self.aborted
        return obj


def _extract_and_score(oracle, target, cfg, grammar, cellName, dim, run,
                       gatePassed, spec, seed):
    watch = Stopwatch()
    try:
        result = extract(oracle, cfg)
    except util.StateExplosionError as e:
        return ExperimentRecord(grammar, cellName, dim, cfg.method, run,
                                watch.elapsedMs(), False, None, None,
                                e.partialSize, False, gatePassed, str(e))
    except util.UnsupportedModelError as e:
        return ExperimentRecord(grammar, cellName, dim, cfg.method, run,
                                watch.elapsedMs(), False, None, None, 0,
                                False, gatePassed, str(e))
    runtimeMs = watch.elapsedMs()
    smallSupport = SETTINGS[grammar][0]
    return ExperimentRecord(
        grammar, cellName, dim, cfg.method, run, runtimeMs,
        dfa_equiv(result.dfa, target) is None,
        gen_accuracy(result.dfa, oracle, smallSupport, spec.genSamples, seed),
        gen_accuracy(result.dfa, oracle,
                     smallSupport + spec.largeSupportOffset,
                     spec.genSamples, seed + 1),
        result.dfa.numStates, result.converged, gatePassed)


def run_task(task):
    """Train one recognizer and extract from it with every method.

    Returns:
        list of :class:`.ExperimentRecord`, one per method
    """
    spec, grammar, (variant, activation), dim, run, seed = task
    target = tomita_dfa(grammar)
    kind = CellKind.create(variant, activation)
    data = gen_dataset(target, tomita_dataset_spec(
        grammar, spec.datasetStrategy, seed), dfa=target)
    testData = gen_test_set(target, data, SETTINGS[grammar][0],
                            max(1, len(data)//4), seed=seed + 1)
    trainCfg = spec.training.getJsonableObject()
    trainCfg["seed"] = seed
    init = build_model(kind, BINARY, dim,
                       randomState=fsmx.get_random_state(seed),
                       std=spec.training.initStd)
    trained = train(init, data, TrainConfig.fromJsonable(trainCfg), testData)
    if not trained.gatePassed:
        util.printWarning("grammar "+str(grammar)+" "+kind.name+" d="
                          +str(dim)+" run "+str(run)+" missed the gates")
    oracle = RnnOracle(trained.model)
    records = []
    for method in spec.methods:
        cfg = spec.extraction.withMethod(method)
        records.append(_extract_and_score(oracle, target, cfg, grammar,
                                          kind.name, dim, run,
                                          trained.gatePassed, spec, seed))
    return records


def _mean(values):
    values = [x for x in values if x is not None]
    if len(values) == 0:
        return None
    return float(np.mean(values))


class BenchmarkResult(object):
    """Records of a benchmark plus their aggregate tables.

    Aggregates only use runs whose RNN passed the accuracy gates.
    Aborted extractions count as failures in the success table and are
    left out of the others.
    """

    def __init__(self, spec, records):
        self.spec = spec
        self.records = records

    def aggregates(self):
        """OrderedDict table -> OrderedDict (cell, dim, grammar) ->
        list of values in method order (None where nothing was measured).
        """
        groups = OrderedDict()
        for record in self.records:
            if not record.gatePassed:
                continue
            key = (record.cell, record.dim, record.grammar)
            groups.setdefault(key, OrderedDict()).setdefault(
                record.method, []).append(record)
        tables = OrderedDict((x, OrderedDict()) for x in TABLES)
        for key, byMethod in groups.items():
            for table in TABLES:
                tables[table][key] = [
                    self._aggregate(table, byMethod.get(method, []))
                    for method in self.spec.methods]
        return tables

    @staticmethod
    def _aggregate(table, records):
        if len(records) == 0:
            return None
        if table == "success":
            return success_percentage(x.success for x in records)
        completed = [x for x in records if x.aborted is None]
        if table == "runtime_ms":
            return _mean([x.runtimeMs for x in completed])
        if table == "gen_acc_large":
            return _mean([x.genAccLarge for x in completed])
        return _mean([x.size for x in completed])

    def writeRecordsCsv(self, fileName, omitTiming=False):
        ofh = util.get_file_handle(fileName, 'w')
        writer = csv.writer(ofh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for record in self.records:
            writer.writerow(record.csvRow(omitTiming))
        ofh.close()

    def _formatCell(self, table, values, omitTiming):
        if table == "runtime_ms" and omitTiming:
            values = [None if x is None else 0.0 for x in values]
        return "["+",".join(MISSING if x is None else str(round(x, 1))
                            for x in values)+"]"

    def writeAggregateCsv(self, fileName, omitTiming=False):
        """One row per (table, cell, dim), one column per grammar, each
        entry the bracketed triple of method values.
        """
        ofh = util.get_file_handle(fileName, 'w')
        writer = csv.writer(ofh, lineterminator="\n")
        grammars = self.spec.grammars
        writer.writerow(["table", "cell", "dim"]
                        + ["G"+str(x) for x in grammars])
        for table, entries in self.aggregates().items():
            rows = OrderedDict()
            for (cell, dim, grammar), values in entries.items():
                rows.setdefault((cell, dim), OrderedDict())[grammar] = values
            for (cell, dim), byGrammar in rows.items():
                writer.writerow(
                    [table, cell, dim]
                    + [self._formatCell(table, byGrammar[x], omitTiming)
                       if x in byGrammar else MISSING for x in grammars])
        ofh.close()

    def writePlotData(self, directory, omitTiming=False):
        """One ``<table>.tsv`` per aggregate table.

        Returns:
            list of written file names
        """
        fileNames = []
        for table, entries in self.aggregates().items():
            fileName = os.path.join(directory, table+".tsv")
            ofh = util.get_file_handle(fileName, 'w')
            ofh.write("\t".join(["group"] + list(self.spec.methods))+"\n")
            for (cell, dim, grammar), values in entries.items():
                if table == "runtime_ms" and omitTiming:
                    values = [None if x is None else 0.0 for x in values]
                ofh.write("\t".join(
                    [cell+"/"+str(dim)+"/G"+str(grammar)]
                    + ["nan" if x is None else repr(x) for x in values])
                    + "\n")
            ofh.close()
            fileNames.append(fileName)
        return fileNames

    def write(self, directory, omitTiming=False, plots=True):
        """records.csv, aggregate.csv, the plot data and the plots."""
        if not os.path.isdir(directory):
            os.makedirs(directory)
        self.writeRecordsCsv(os.path.join(directory, "records.csv"),
                             omitTiming)
        self.writeAggregateCsv(os.path.join(directory, "aggregate.csv"),
                               omitTiming)
        plotData = self.writePlotData(directory, omitTiming)
        if plots:
            plot_tables(plotData)


def run_benchmark(spec, threads=None, verbose=False):
    """Train and extract over the whole grid of ``spec``.

    Training runs are spread over ``threads`` worker processes
    (default: the ``FSMX_THREADS`` environment variable, else 1).

    Returns:
        a :class:`.BenchmarkResult`
    """
    tasks = spec.tasks()
    threads = util.get_thread_count() if threads is None else threads
    if verbose:
        print("running "+str(len(tasks))+" trainings on "+str(threads)
              +" worker(s)")
    if threads > 1 and len(tasks) > 1:
        pool = multiprocessing.Pool(min(threads, len(tasks)))
        try:
            results = pool.map(run_task, tasks)
        finally:
            pool.close()
            pool.join()
    else:
        results = []
        for task in tasks:
            results.append(run_task(task))
            if verbose:
                print("done: grammar "+str(task[1])+" "+str(task[2])
                      +" d="+str(task[3])+" run "+str(task[4]))
    return BenchmarkResult(spec, [x for records in results for x in records])


def read_plot_data(fileName):
    """Read a ``<table>.tsv`` back into (methods, groups, values)."""
    groups = []
    values = []
    header = []

    def action(inp, line_number):
        if line_number == 1:
            header.extend(inp[1:])
        else:
            groups.append(inp[0])
            values.append([float(x) for x in inp[1:]])

    util.perform_action_on_each_line_of_file(
        file_handle=util.get_file_handle(fileName),
        action=action,
        transformation=util.default_tab_seppd)
    return header, groups, np.array(values).reshape(len(groups), len(header))


def plot_tables(fileNames):
    """Grouped bar chart next to each TSV plot-data file."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    for fileName in fileNames:
        methods, groups, values = read_plot_data(fileName)
        positions = np.arange(len(groups))
        width = 0.8/max(1, len(methods))
        fig, ax = plt.subplots(figsize=(max(6, len(groups)*0.8), 4))
        for i, method in enumerate(methods):
            ax.bar(positions + i*width, np.nan_to_num(values[:, i]), width,
                   label=method)
        ax.set_xticks(positions + width*(len(methods) - 1)/2.0)
        ax.set_xticklabels(groups, rotation=45, ha="right", fontsize=7)
        ax.set_title(util.get_file_name_parts(fileName).core_file_name)
        ax.legend()
        fig.tight_layout()
        fig.savefig(util.get_file_name_parts(fileName)
                    .get_transformed_file_path(lambda x: x, extension=".png"))
        plt.close(fig)
