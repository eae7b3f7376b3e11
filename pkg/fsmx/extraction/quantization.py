from __future__ import absolute_import, division, print_function
from collections import OrderedDict, deque
import numpy as np
from scipy.spatial.distance import cdist
from fsmx.fsmxutil import util
from fsmx.extraction.core import (ExtractionResult, Stopwatch, QUANTIZATION,
                                  dfa_from_table)
from fsmx.extraction.oracles import as_oracle


def grid_cell(features, resolution):
    """Index of the equal-width cell of [0, 1]^d holding ``features``.
    """
    scaled = np.minimum(np.asarray(features)*resolution, resolution - 1)
    return tuple(int(x) for x in np.floor(np.maximum(scaled, 0)))


def extract_quantization(oracle, cfg):
    """Split [0, 1]^d into ``resolution^d`` equal cells and explore the
    cells reachable from the initial vector breadth-first.

    Each cell keeps the first vector that reached it as its witness;
    transitions and labels are computed from witnesses. Witnesses found
    at ``maxDepth`` get transitions but no new cells: a successor
    falling in an unseen cell goes to the cell of the nearest witness.

    Raises:
        UnsupportedModelError: unbounded (relu) oracle

        StateExplosionError: more than ``cfg.cellCap`` cells
    """
    watch = Stopwatch()
    oracle = as_oracle(oracle)
    if not oracle.isBounded():
        raise util.UnsupportedModelError(
            "Quantization needs bounded hidden values; relu states have an"
            " infinite support")
    alphabet = oracle.alphabet
    cells = OrderedDict()
    witnesses = []
    witnessFeatures = []
    depths = []

    def register(vector, depth):
        features = oracle.features(vector)
        cell = grid_cell(features, cfg.resolution)
        if cell not in cells:
            if len(cells) >= cfg.cellCap:
                raise util.StateExplosionError(
                    "Quantization exceeded "+str(cfg.cellCap)+" cells",
                    len(cells))
            cells[cell] = len(witnesses)
            witnesses.append(vector)
            witnessFeatures.append(features)
            depths.append(depth)
            queue.append(cells[cell])
        return cells[cell]

    queue = deque()
    register(oracle.initial(), 0)
    delta = OrderedDict()
    frontier = []
    while queue:
        state = queue.popleft()
        if depths[state] >= cfg.maxDepth:
            frontier.append(state)
            continue
        for k, symbol in enumerate(alphabet):
            delta[(state, k)] = register(
                oracle.step(witnesses[state], symbol), depths[state] + 1)
    for state in frontier:
        for k, symbol in enumerate(alphabet):
            vector = oracle.step(witnesses[state], symbol)
            features = oracle.features(vector)
            cell = grid_cell(features, cfg.resolution)
            if cell in cells:
                delta[(state, k)] = cells[cell]
            else:
                delta[(state, k)] = int(np.argmin(
                    cdist(features[None, :], np.array(witnessFeatures))[0]))
    table = [[delta[(state, k)] for k in range(len(alphabet))]
             for state in range(len(witnesses))]
    labels = [oracle.classify(x) for x in witnesses]
    dfa = dfa_from_table(alphabet, table, labels)
    return ExtractionResult(
        dfa, QUANTIZATION, cfg, runtimeMs=watch.elapsedMs(), converged=True,
        membershipQueries=len(witnesses),
        extra=OrderedDict([("cells", len(witnesses)),
                           ("frontier", len(frontier))]))
