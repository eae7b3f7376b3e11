from __future__ import absolute_import, division, print_function
import numpy as np
from fsmx.fsmxutil import util


def _check_first_order(model):
    if model.kind.variant != "first-order":
        raise util.DiagnosticUnavailableError(
            "Lipschitz diagnostics need a first-order cell, got "
            +model.kind.name)


def lipschitz_bound(model):
    """Frobenius norm of the recurrent matrix of a first-order cell.

    For a 1-Lipschitz activation, ||f(x) - f(y)|| <= ||W||_F ||x - y||
    for every symbol.

    Returns:
        (bound, contractive) where contractive is bound < 1
    """
    _check_first_order(model)
    bound = float(np.sqrt(np.sum(model.weights["W"]**2)))
    return bound, bound < 1.0


def empirical_lipschitz(model, pairs, symbol):
    """Largest observed ||step(x) - step(y)|| / ||x - y|| over ``pairs``.
    """
    _check_first_order(model)
    pairs = list(pairs)
    if len(pairs) == 0:
        raise ValueError("empirical_lipschitz needs at least one pair")
    best = 0.0
    for x, y in pairs:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        gap = np.linalg.norm(x - y)
        if gap == 0:
            raise ValueError("pairs must hold distinct states")
        ratio = np.linalg.norm(model.step(x, symbol)
                               - model.step(y, symbol))/gap
        best = max(best, float(ratio))
    return best


def contraction_trace(model, x, y, symbol, steps):
    """Distances between two trajectories driven by the same symbol.

    Returns:
        array of length steps+1, starting with ||x - y||
    """
    distances = [float(np.linalg.norm(np.asarray(x) - np.asarray(y)))]
    for i in range(steps):
        x = model.step(x, symbol)
        y = model.step(y, symbol)
        distances.append(float(np.linalg.norm(x - y)))
    return np.array(distances)


def random_state_pairs(dim, count, randomState, low=-1.0, high=1.0):
    """``count`` pairs of distinct random hidden vectors in [low, high]^dim.
    """
    pairs = []
    while len(pairs) < count:
        x = randomState.uniform(low, high, size=dim)
        y = randomState.uniform(low, high, size=dim)
        if np.any(x != y):
            pairs.append((x, y))
    return pairs
