from __future__ import absolute_import, division, print_function
from collections import OrderedDict
import numpy as np
from scipy.spatial.distance import cdist
import fsmx

MAX_ITERATIONS = 300


class KMeansResult(object):
    """Outcome of :func:`kmeans`.

    Arguments:
        assignment: int array, cluster index of each point

        centroids: ``K x d`` array

        iterations: Lloyd iterations performed
    """

    def __init__(self, assignment, centroids, iterations):
        self.assignment = assignment
        self.centroids = centroids
        self.iterations = iterations

    @property
    def numClusters(self):
        return len(self.centroids)

    def getJsonableObject(self):
        return OrderedDict([("clusters", self.numClusters),
                            ("iterations", self.iterations)])


def kmeans_plus_plus(points, K, randomState):
    """Indices of ``K`` distinct seed points drawn by k-means++.

    Each further seed is drawn with probability proportional to its
    squared distance to the nearest seed so far; when every remaining
    distance is zero the seed is drawn uniformly among unchosen points.
    """
    chosen = [int(randomState.randint(len(points)))]
    closest = cdist(points, points[chosen], "sqeuclidean")[:, 0]
    while len(chosen) < K:
        weights = closest.copy()
        weights[chosen] = 0.0
        total = weights.sum()
        if total > 0:
            nextIdx = int(randomState.choice(len(points), p=weights/total))
        else:
            unchosen = np.setdiff1d(np.arange(len(points)), chosen)
            nextIdx = int(unchosen[randomState.randint(len(unchosen))])
        chosen.append(nextIdx)
        closest = np.minimum(
            closest, cdist(points, points[[nextIdx]], "sqeuclidean")[:, 0])
    return chosen


def kmeans(points, K, seed=fsmx.DEFAULT_SEED, maxIterations=MAX_ITERATIONS):
    """Lloyd's algorithm from a seeded k-means++ start.

    Iterates until the assignment stops changing or ``maxIterations``
    is reached. Ties between equally close centroids go to the lowest
    index. A cluster left empty is re-seeded with the point farthest
    from its current centroid.

    Arguments:
        points: ``n x d`` array

        K: number of clusters, at most n

        seed: random seed of the initialization

    Returns:
        a :class:`.KMeansResult`
    """
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points[:, None]
    if K < 1:
        raise ValueError("K must be at least 1")
    if K > len(points):
        raise ValueError("K="+str(K)+" exceeds the "+str(len(points))
                         +" points")
    randomState = fsmx.get_random_state(seed)
    centroids = points[kmeans_plus_plus(points, K, randomState)].copy()
    assignment = None
    iterations = 0
    for iterations in range(1, maxIterations + 1):
        distances = cdist(points, centroids, "sqeuclidean")
        newAssignment = np.argmin(distances, axis=1)
        ownDistance = distances[np.arange(len(points)), newAssignment]
        for cluster in range(K):
            if not np.any(newAssignment == cluster):
                farthest = int(np.argmax(ownDistance))
                newAssignment[farthest] = cluster
                ownDistance[farthest] = -1.0
                centroids[cluster] = points[farthest]
        if assignment is not None\
                and np.array_equal(newAssignment, assignment):
            break
        assignment = newAssignment
        for cluster in range(K):
            centroids[cluster] = points[assignment == cluster].mean(axis=0)
    return KMeansResult(assignment, centroids, iterations)
