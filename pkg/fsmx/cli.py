from __future__ import absolute_import, division, print_function
from collections import OrderedDict
import argparse
import os
import sys
import numpy as np
import fsmx
from fsmx.fsmxutil import util
from fsmx.automata.core import Dfa, dfa_minimize, dfa_equiv
from fsmx.automata.weighted import Wfa, Pfa
from fsmx.rnn.cells import CellKind
from fsmx.rnn.model import RnnModel, build_model
from fsmx.training.core import print_sample, read_sample_file
from fsmx.training.datagen import (DatasetSpec, gen_dataset, gen_test_set,
                                   STRATEGIES, UNIFORM_UPSAMPLED)
from fsmx.training.trainer import TrainConfig, train
from fsmx.extraction.core import ExtractionConfig, extract, METHODS, LSTAR
from fsmx.extraction.oracles import as_oracle
from fsmx.distances.sat import read_dimacs
from fsmx.distances.finite import (dist_inf_finite, eq_finite,
                                   tchebychev_enumerate)
from fsmx.distances.reduction import reduction_bundle
from fsmx.learning.reference import DpfaLm
from fsmx.learning.srm import (LearnerConfig, learn_srm, generalization_bound,
                               sample_size_bound, calibrate_c)
from fsmx.learning.mps import learn_mps, mps_query_count
from fsmx.learning.zeta import expected_risk
from fsmx.bench.tomita import tomita_dfa, SETTINGS
from fsmx.bench.runner import PRESETS

JSON = "json"
CSV = "csv"


def load_model(fileName):
    """Read a DFA, PFA, WFA or RNN from its JSON file; an extraction
    record yields its DFA.
    """
    obj = util.read_json(fileName)
    if "weights" in obj:
        return RnnModel.fromJsonable(obj)
    if "delta" in obj:
        return Dfa.fromJsonable(obj)
    if "dfa" in obj and "method" in obj:
        # extraction record
        return Dfa.fromJsonable(obj["dfa"])
    if "final" in obj:
        return Pfa.fromJsonable(obj)
    if "beta" in obj:
        return Wfa.fromJsonable(obj)
    raise ValueError(fileName+" holds no known model")


def _out_path(options, fileName, default="."):
    directory = options.out if options.out is not None else default
    if not os.path.isdir(directory):
        os.makedirs(directory)
    return os.path.join(directory, fileName)


def _emit_json(options, fileName, jsonable):
    """Write to ``<out>/<fileName>``, or to stdout without ``--out``."""
    if options.out is None:
        print(util.format_as_json(jsonable))
    else:
        util.write_json(_out_path(options, fileName), jsonable)


def _emit_values(options, values):
    if options.format == CSV:
        print(",".join(values.keys()))
        print(",".join(str(x) for x in values.values()))
    else:
        print(util.format_as_json(values))


def _target_dfa(options):
    if getattr(options, "dfa", None) is not None:
        return load_model(options.dfa)
    if getattr(options, "grammar", None) is not None:
        return tomita_dfa(options.grammar)
    return None


def _load_config(cls, fileName, **overrides):
    obj = OrderedDict() if fileName is None else util.read_json(fileName)
    obj.update((x, y) for (x, y) in overrides.items() if y is not None)
    return cls.fromJsonable(obj)


def do_gen_data(options):
    dfa = _target_dfa(options)
    if dfa is None:
        raise ValueError("gen-data needs --grammar or --dfa")
    maxLength, size = (SETTINGS[options.grammar]
                       if options.grammar is not None else (22, 800))
    spec = DatasetSpec(
        strategy=options.strategy,
        maxLength=options.max_length if options.max_length else maxLength,
        size=options.size if options.size else size,
        ratio=options.ratio, quota=options.quota, seed=options.seed)
    sample = gen_dataset(dfa, spec, dfa=dfa)
    print_sample(_out_path(options, "data.tsv"), sample)


def do_train(options):
    data = read_sample_file(options.data, alphabet=["0", "1"])
    cfg = _load_config(TrainConfig, options.config, epochs=options.epochs,
                       seed=options.seed)
    testData = None
    if options.grammar is not None:
        target = tomita_dfa(options.grammar)
        testData = gen_test_set(target, data, SETTINGS[options.grammar][0],
                                max(1, len(data)//4), seed=options.seed + 1)
    kind = CellKind.create(options.cell, options.activation)
    init = build_model(kind, data.alphabet, options.dim,
                       randomState=fsmx.get_random_state(options.seed),
                       std=cfg.initStd)
    trained = train(init, data, cfg, testData)
    util.write_json(_out_path(options, "rnn.json"),
                    trained.model.getJsonableObject())
    util.write_json(_out_path(options, "train.json"),
                    trained.getJsonableObject())
    if not trained.gatePassed:
        util.printWarning("accuracy gates not met: train "
                          +str(trained.trainAccuracy)+", test "
                          +str(trained.testAccuracy))


def do_extract(options):
    source = options.model if options.model is not None else options.dfa
    if source is None:
        raise ValueError("extract needs --model or --dfa")
    cfg = _load_config(ExtractionConfig, options.config,
                       method=options.method, resolution=options.resolution,
                       clusters=options.clusters, budget=options.budget,
                       maxDepth=options.depth, seed=options.seed)
    result = extract(as_oracle(load_model(source)), cfg)
    util.write_json(_out_path(options, "extraction.json"),
                    result.getJsonableObject(options.omit_timing))


def do_minimize(options):
    _emit_json(options, "dfa.json",
               dfa_minimize(load_model(options.dfa)).getJsonableObject())


def do_equiv(options):
    witness = dfa_equiv(load_model(options.a), load_model(options.b))
    if witness is None:
        print("equivalent")
    else:
        print("counterexample\t"+witness)


def do_distance(options):
    a = load_model(options.a)
    b = load_model(options.b)
    values = OrderedDict([("mode", options.mode)])
    if options.mode == "inf":
        value, witness = dist_inf_finite(a, b, options.max_length)
        values["value"] = util.format_weight(value)
        values["witness"] = witness
    elif options.mode == "eq":
        witness = eq_finite(a, b, options.max_length)
        values["equal"] = witness is None
        values["witness"] = witness
    else:
        if options.c is None:
            raise ValueError("tchebychev mode needs --c")
        result = tchebychev_enumerate(a, b, float(util.parse_rational(
            options.c)), cap=options.cap)
        values.update(result.getJsonableObject())
    _emit_values(options, values)


def do_reduce_sat(options):
    bundle = reduction_bundle(read_dimacs(options.formula),
                              util.parse_rational(options.eps),
                              None if options.s is None
                              else util.parse_rational(options.s))
    bundle.write(options.out if options.out is not None else ".")


def do_decide_sat(options):
    bundle = reduction_bundle(read_dimacs(options.formula),
                              util.parse_rational(options.eps),
                              None if options.s is None
                              else util.parse_rational(options.s))
    print("SAT" if bundle.decide() else "UNSAT")


def do_learn_srm(options):
    sample = read_sample_file(options.data, alphabet=["0", "1"])
    cfg = LearnerConfig(C=options.C, delta=options.delta,
                        epsilon=options.epsilon, sizeCap=options.cap,
                        seed=options.seed)
    result = learn_srm(sample, cfg)
    numSymbols = len(sample.alphabet)
    report = OrderedDict([("method", "srm"),
                          ("config", cfg.getJsonableObject()),
                          ("m", result.m),
                          ("returned_dfa", result.dfa.getJsonableObject()),
                          ("L_S", result.empiricalRisk),
                          ("penalty", result.penalty),
                          ("objective", result.objective),
                          ("trace", result.trace),
                          ("bound_values", OrderedDict([
                              ("generalization", generalization_bound(
                                  result.m, result.dfa.numStates, cfg.delta,
                                  numSymbols, cfg.C)),
                              ("generalization_weighted",
                               generalization_bound(
                                   result.m, result.dfa.numStates, cfg.delta,
                                   numSymbols, cfg.C, weighted=True))])),
                          ("seed", options.seed)])
    _emit_json(options, "learner.json", report)


def do_learn_mps(options):
    lm = DpfaLm(load_model(options.pfa))
    target = _target_dfa(options)
    if target is None:
        raise ValueError("learn-mps needs --grammar or --dfa")
    if options.queries is not None:
        numQueries = options.queries
    elif options.eps is not None:
        numQueries = mps_query_count(len(lm.alphabet), lm.pfa.tailRate(),
                                     float(util.parse_rational(options.eps)))[0]
    else:
        raise ValueError("learn-mps needs --queries or --eps")
    result = learn_mps(lm, target, numQueries)
    report = OrderedDict([("method", "mps"),
                          ("queries", numQueries),
                          ("returned_dfa", result.dfa.getJsonableObject()),
                          ("covered_mass", float(result.coveredMass)),
                          ("L_P", float(expected_risk(result.dfa, lm,
                                                      target))),
                          ("seed", options.seed)])
    _emit_json(options, "learner.json", report)


def _int_list(string):
    return [int(x) for x in string.split(",") if x.strip() != ""]


def do_bench(options):
    overrides = OrderedDict([("seed", options.seed)])
    if options.grammars is not None:
        overrides["grammars"] = _int_list(options.grammars)
    if options.runs is not None:
        overrides["runs"] = options.runs
    if options.dims is not None:
        overrides["dims"] = _int_list(options.dims)
    spec = PRESETS[options.preset](**overrides)
    from fsmx.bench.runner import run_benchmark
    result = run_benchmark(spec, verbose=options.verbose)
    result.write(options.out if options.out is not None else "bench_out",
                 omitTiming=options.omit_timing, plots=not options.no_plots)


def do_bounds(options):
    values = OrderedDict()
    if options.calibrate:
        bestC, meanRisks = calibrate_c(seed=options.seed)
        values["C"] = bestC
        for C, risk in meanRisks.items():
            values["mean_risk_C="+str(C)] = risk
    elif options.m is not None and options.n is not None:
        values["generalization"] = generalization_bound(
            options.m, options.n, options.delta, options.sigma, options.C)
        values["generalization_weighted"] = generalization_bound(
            options.m, options.n, options.delta, options.sigma, options.C,
            weighted=True)
    else:
        values["m"] = sample_size_bound(options.eps, options.delta,
                                        options.sigma, options.C, options.c)
    _emit_values(options, values)


def build_parser():
    parser = argparse.ArgumentParser(prog="fsmx")
    parser.add_argument("--seed", type=int, default=fsmx.DEFAULT_SEED)
    parser.add_argument("--out", default=None)
    parser.add_argument("--format", choices=[JSON, CSV], default=JSON)
    parser.add_argument("--omit-timing", action="store_true")
    subparsers = parser.add_subparsers(dest="command")

    p = subparsers.add_parser("gen-data")
    p.add_argument("--grammar", type=int)
    p.add_argument("--dfa")
    p.add_argument("--strategy", choices=STRATEGIES,
                   default=UNIFORM_UPSAMPLED)
    p.add_argument("--max-length", type=int)
    p.add_argument("--size", type=int)
    p.add_argument("--ratio", type=float, default=0.5)
    p.add_argument("--quota", type=int, default=3)
    p.set_defaults(func=do_gen_data)

    p = subparsers.add_parser("train")
    p.add_argument("--data", required=True)
    p.add_argument("--grammar", type=int)
    p.add_argument("--cell", default="second-order")
    p.add_argument("--activation", default="sigmoid")
    p.add_argument("--dim", type=int, default=20)
    p.add_argument("--epochs", type=int)
    p.add_argument("--config")
    p.set_defaults(func=do_train)

    p = subparsers.add_parser("extract")
    p.add_argument("--model")
    p.add_argument("--dfa")
    p.add_argument("--method", choices=METHODS, default=LSTAR)
    p.add_argument("--resolution", type=int)
    p.add_argument("--clusters", type=int)
    p.add_argument("--budget", type=int)
    p.add_argument("--depth", type=int)
    p.add_argument("--config")
    p.set_defaults(func=do_extract)

    p = subparsers.add_parser("minimize")
    p.add_argument("dfa")
    p.set_defaults(func=do_minimize)

    p = subparsers.add_parser("equiv")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=do_equiv)

    p = subparsers.add_parser("distance")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--max-length", type=int, default=10)
    p.add_argument("--mode", choices=["inf", "eq", "tchebychev"],
                   default="inf")
    p.add_argument("--c")
    p.add_argument("--cap", type=int, default=10**6)
    p.set_defaults(func=do_distance)

    for name, func in (("reduce-sat", do_reduce_sat),
                       ("decide-sat", do_decide_sat)):
        p = subparsers.add_parser(name)
        p.add_argument("formula")
        p.add_argument("--eps", required=True)
        p.add_argument("--s")
        p.set_defaults(func=func)

    p = subparsers.add_parser("learn-srm")
    p.add_argument("--data", required=True)
    p.add_argument("--C", type=float, default=1.0)
    p.add_argument("--cap", type=int, default=4)
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--epsilon", type=float, default=0.1)
    p.set_defaults(func=do_learn_srm)

    p = subparsers.add_parser("learn-mps")
    p.add_argument("--pfa", required=True)
    p.add_argument("--grammar", type=int)
    p.add_argument("--dfa")
    p.add_argument("--queries", type=int)
    p.add_argument("--eps")
    p.set_defaults(func=do_learn_mps)

    p = subparsers.add_parser("bench")
    p.add_argument("--preset", choices=list(PRESETS), default="desk")
    p.add_argument("--grammars")
    p.add_argument("--runs", type=int)
    p.add_argument("--dims")
    p.add_argument("--no-plots", action="store_true")
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=do_bench)

    p = subparsers.add_parser("bounds")
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--sigma", type=int, default=2)
    p.add_argument("--C", type=float, default=1.0)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--calibrate", action="store_true")
    p.set_defaults(func=do_bounds)
    return parser


def main(argv=None):
    """Run one subcommand.

    Returns:
        0 on success, 1 on a domain error; usage errors exit with 2
    """
    parser = build_parser()
    options = parser.parse_args(argv)
    if options.command is None:
        parser.print_usage(sys.stderr)
        return 2
    np.random.seed(options.seed)
    fsmx.random.seed(options.seed)
    try:
        options.func(options)
    except (util.FsmxError, ValueError, IOError) as e:
        sys.stderr.write("error: "+str(e)+"\n")
        return 1
    return 0
