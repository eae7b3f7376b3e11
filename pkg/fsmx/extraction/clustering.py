from __future__ import absolute_import, division, print_function
from collections import OrderedDict, deque
import numpy as np
from scipy.spatial.distance import cdist
from fsmx.extraction.core import (ExtractionResult, Stopwatch, CLUSTERING,
                                  dfa_from_table)
from fsmx.extraction.kmeans import kmeans
from fsmx.extraction.oracles import as_oracle


def collect_prefix_vectors(oracle, maxDepth, budget):
    """Hidden vectors of prefixes in breadth-first (length-lex) order,
    up to length ``maxDepth`` and at most ``budget`` of them.

    Returns:
        (list of prefixes as symbol lists, array of vectors)
    """
    prefixes = [[]]
    vectors = [oracle.initial()]
    queue = deque([0])
    while queue and len(vectors) < budget:
        idx = queue.popleft()
        if len(prefixes[idx]) >= maxDepth:
            continue
        for symbol in oracle.alphabet:
            if len(vectors) >= budget:
                break
            prefixes.append(prefixes[idx] + [symbol])
            vectors.append(oracle.step(vectors[idx], symbol))
            queue.append(len(vectors) - 1)
    return prefixes, np.array(vectors)


def majority_label(labels):
    """True only on a strict majority of positive labels."""
    labels = np.asarray(labels, dtype=bool)
    return bool(labels.sum()*2 > len(labels))


def extract_clustering(oracle, cfg):
    """Cluster the hidden vectors of prefixes with k-means and read the
    DFA off the clusters.

    Every collected vector is stepped on every symbol and its successor
    assigned to the nearest centroid; a cluster's transition on a symbol
    is the most frequent target (lowest id on ties) and its label the
    majority of member classifications (reject on ties). K is lowered to
    the number of distinct vectors when it exceeds it.
    """
    watch = Stopwatch()
    oracle = as_oracle(oracle)
    if cfg.budget < cfg.clusters:
        raise ValueError("budget "+str(cfg.budget)+" is smaller than K="
                         +str(cfg.clusters))
    alphabet = oracle.alphabet
    _, vectors = collect_prefix_vectors(oracle, cfg.maxDepth, cfg.budget)
    points = np.array([oracle.features(x) for x in vectors])
    numDistinct = len(np.unique(points, axis=0))
    numClusters = min(cfg.clusters, numDistinct)
    result = kmeans(points, numClusters, seed=cfg.seed)
    retained = [x for x in range(numClusters)
                if np.any(result.assignment == x)]
    newId = dict((old, new) for (new, old) in enumerate(retained))
    centroids = result.centroids[retained]
    assignment = np.array([newId[x] for x in result.assignment])

    counts = np.zeros((len(retained), len(alphabet), len(retained)),
                      dtype=int)
    for k, symbol in enumerate(alphabet):
        successors = oracle.stepAll(vectors, symbol)
        successorPoints = np.array([oracle.features(x) for x in successors])
        targets = np.argmin(cdist(successorPoints, centroids), axis=1)
        np.add.at(counts, (assignment, k, targets), 1)
    delta = np.argmax(counts, axis=2)
    conflicts = int((counts.sum(axis=2) - counts.max(axis=2)).sum())
    memberLabels = np.array([oracle.classify(x) for x in vectors])
    labels = [majority_label(memberLabels[assignment == x])
              for x in range(len(retained))]
    dfa = dfa_from_table(alphabet, delta, labels, initial=int(assignment[0]))

    statistics = []
    for cluster in range(len(retained)):
        for k, symbol in enumerate(alphabet):
            statistics.append(OrderedDict([
                ("cluster", cluster), ("symbol", symbol),
                ("counts", [int(x) for x in counts[cluster, k]])]))
    return ExtractionResult(
        dfa, CLUSTERING, cfg, runtimeMs=watch.elapsedMs(), converged=True,
        membershipQueries=len(vectors), conflictsResolved=conflicts,
        extra=OrderedDict([("points", len(vectors)),
                           ("clusters", len(retained)),
                           ("kmeansIterations", result.iterations),
                           ("transitionCounts", statistics)]))
