from __future__ import absolute_import, division, print_function
from collections import OrderedDict
import numpy as np
from scipy.special import expit
import fsmx
from fsmx.fsmxutil import util
from fsmx.rnn.model import RnnModel, RECOGNIZER, build_model
from fsmx.training.core import LabeledSample


class TrainConfig(object):
    """Optimization settings and acceptance gates.

    Arguments:
        learningRate: Adam step size

        beta1, beta2, adamEpsilon: Adam moment decay rates and
    denominator offset

        epochs: passes over the training data per attempt

        batchSize: strings per gradient step

        seed: random seed (shuffling, restarts, test split)

        trainGate: minimal training accuracy

        testGate: minimal test accuracy

        maxRestarts: fresh initializations tried after the first attempt

        initStd: standard deviation of the Gaussian initialization

        verbose: print one line per epoch
    """

    def __init__(self, learningRate=1e-2, beta1=0.9, beta2=0.999,
                 adamEpsilon=1e-8, epochs=30, batchSize=32,
                 seed=fsmx.DEFAULT_SEED, trainGate=0.99, testGate=0.85,
                 maxRestarts=3, initStd=0.1, verbose=False):
        if learningRate <= 0 or adamEpsilon <= 0 or initStd <= 0:
            raise ValueError("rates must be positive")
        if not (0 < beta1 < 1 and 0 < beta2 < 1):
            raise ValueError("Adam decay rates must lie in (0, 1)")
        if not (0 < trainGate <= 1 and 0 < testGate <= 1):
            raise ValueError("gates must lie in (0, 1]")
        if epochs < 0 or batchSize < 1 or maxRestarts < 0:
            raise ValueError("epochs, batchSize and maxRestarts must be"
                             " nonnegative (batchSize positive)")
        self.learningRate = learningRate
        self.beta1 = beta1
        self.beta2 = beta2
        self.adamEpsilon = adamEpsilon
        self.epochs = epochs
        self.batchSize = batchSize
        self.seed = seed
        self.trainGate = trainGate
        self.testGate = testGate
        self.maxRestarts = maxRestarts
        self.initStd = initStd
        self.verbose = verbose

    def getJsonableObject(self):
        return OrderedDict([("learningRate", self.learningRate),
                            ("beta1", self.beta1),
                            ("beta2", self.beta2),
                            ("adamEpsilon", self.adamEpsilon),
                            ("epochs", self.epochs),
                            ("batchSize", self.batchSize),
                            ("seed", self.seed),
                            ("trainGate", self.trainGate),
                            ("testGate", self.testGate),
                            ("maxRestarts", self.maxRestarts),
                            ("initStd", self.initStd)])

    @classmethod
    def fromJsonable(cls, obj):
        return cls(**obj)


class TrainedModel(object):
    """Outcome of :func:`train`.

    Arguments:
        model: the trained :class:`.RnnModel`

        history: list of per-epoch OrderedDicts (attempt, epoch, loss,
    trainAccuracy, testAccuracy)

        trainAccuracy, testAccuracy: final accuracies

        restarts: fresh initializations used after the first attempt

        gatePassed: both accuracy gates met
    """

    def __init__(self, model, history, trainAccuracy, testAccuracy,
                 restarts, gatePassed):
        self.model = model
        self.history = history
        self.trainAccuracy = trainAccuracy
        self.testAccuracy = testAccuracy
        self.restarts = restarts
        self.gatePassed = gatePassed

    def getJsonableObject(self):
        return OrderedDict([("trainAccuracy", self.trainAccuracy),
                            ("testAccuracy", self.testAccuracy),
                            ("restarts", self.restarts),
                            ("gatePassed", self.gatePassed),
                            ("history", self.history)])


def encode_batch(model, strings):
    """Symbol indices padded to the longest string, plus the lengths.
    """
    encoded = [[model.symbolIndex(x) for x in model.alphabet.split(w)]
               for w in strings]
    lengths = np.array([len(x) for x in encoded], dtype=int)
    indices = np.zeros((len(encoded), max([0] + list(lengths))), dtype=int)
    for i, row in enumerate(encoded):
        indices[i, :len(row)] = row
    return indices, lengths


def _initial_states(model, params, batchSize):
    states = np.zeros((batchSize, model.stateSize))
    states[:, :model.dim] = params["h0"]
    return states


def forward_batch(model, params, indices, lengths):
    """Run a padded batch; finished strings keep their final state.

    Returns:
        (final states, per-step caches)
    """
    states = _initial_states(model, params, indices.shape[0])
    caches = []
    for t in range(indices.shape[1]):
        mask = (t < lengths)[:, None].astype(float)
        inputs = params["B"][indices[:, t]]
        newStates, cache = model.kind.forward(params, states, inputs)
        states = mask*newStates + (1.0 - mask)*states
        caches.append((cache, mask, indices[:, t]))
    return states, caches


def loss_and_gradients(model, strings, labels, params=None):
    """Mean binary cross-entropy of the recognizer head and its gradient
    with respect to every weight, by backpropagation through time.
    """
    if model.head != RECOGNIZER:
        raise util.UnsupportedModelError("Training needs a recognizer head")
    params = model.weights if params is None else params
    labels = np.asarray(labels, dtype=float)
    batchSize = len(labels)
    indices, lengths = encode_batch(model, strings)
    states, caches = forward_batch(model, params, indices, lengths)
    hidden = states[:, :model.dim]
    logits = hidden.dot(params["O"][0]) + params["Ob"][0]
    loss = float(np.mean(np.logaddexp(0.0, logits) - labels*logits))

    grads = OrderedDict((name, np.zeros_like(val))
                        for (name, val) in params.items())
    dLogits = (expit(logits) - labels)/batchSize
    grads["O"][0] = dLogits.dot(hidden)
    grads["Ob"][0] = dLogits.sum()
    dStates = np.zeros_like(states)
    dStates[:, :model.dim] = np.outer(dLogits, params["O"][0])
    for cache, mask, stepIndices in reversed(caches):
        dNew = dStates*mask
        dPrevious, dInputs = model.kind.backward(params, cache, dNew, grads)
        dStates = dPrevious + dStates*(1.0 - mask)
        np.add.at(grads["B"], stepIndices, dInputs)
    grads["h0"] += dStates[:, :model.dim].sum(axis=0)
    return loss, grads


def predict_confidences(model, strings, params=None):
    params = model.weights if params is None else params
    if len(strings) == 0:
        return np.zeros(0)
    indices, lengths = encode_batch(model, strings)
    states, _ = forward_batch(model, params, indices, lengths)
    return expit(states[:, :model.dim].dot(params["O"][0]) + params["Ob"][0])


def accuracy(model, sample, params=None):
    """Fraction of ``sample`` the recognizer labels correctly.
    """
    if len(sample) == 0:
        return 1.0
    predicted = predict_confidences(model, sample.strings, params) > 0.5
    return float(np.mean(predicted == sample.labels))


class AdamOptimizer(object):
    """Adam with bias-corrected first and second moments.
    """

    def __init__(self, params, learningRate, beta1, beta2, epsilon):
        self.learningRate = learningRate
        self.beta1 = beta1
        self.beta2 = beta2
        self.epsilon = epsilon
        self.firstMoment = OrderedDict((x, np.zeros_like(y))
                                       for (x, y) in params.items())
        self.secondMoment = OrderedDict((x, np.zeros_like(y))
                                        for (x, y) in params.items())
        self.steps = 0

    def update(self, params, grads):
        self.steps += 1
        correction1 = 1.0 - self.beta1**self.steps
        correction2 = 1.0 - self.beta2**self.steps
        for name in params:
            m = self.firstMoment[name]
            v = self.secondMoment[name]
            m *= self.beta1
            m += (1.0 - self.beta1)*grads[name]
            v *= self.beta2
            v += (1.0 - self.beta2)*grads[name]**2
            params[name] -= (self.learningRate*(m/correction1)
                             /(np.sqrt(v/correction2) + self.epsilon))


def _split(data, randomState):
    """Hold out a fifth of the distinct strings; every copy of a string
    lands on the same side.
    """
    distinct = list(OrderedDict.fromkeys(data.strings))
    numTest = len(distinct)//5
    if numTest == 0:
        return data, data.subset([])
    heldOut = set(distinct[i] for i in
                  randomState.permutation(len(distinct))[:numTest])
    strings = data.strings
    return (data.subset([i for i in range(len(data))
                         if strings[i] not in heldOut]),
            data.subset([i for i in range(len(data))
                         if strings[i] in heldOut]))


def disjoint_test_data(testData, trainData):
    """``testData`` without the strings that also occur in ``trainData``.
    """
    dropped = testData.overlap(trainData)
    if len(dropped) == 0:
        return testData
    kept = testData.excluding(dropped)
    if len(kept) == 0:
        raise ValueError("Every test string also occurs in the training"
                         " sample")
    util.printWarning("dropped "+str(len(testData) - len(kept))
                      +" test strings that occur in the training sample")
    return kept


def _fit(model, trainData, testData, cfg, randomState, attempt, history):
    params = OrderedDict((x, np.array(y)) for (x, y) in model.weights.items())
    optimizer = AdamOptimizer(params, cfg.learningRate, cfg.beta1, cfg.beta2,
                              cfg.adamEpsilon)
    strings = trainData.strings
    labels = trainData.labels
    for epoch in range(cfg.epochs):
        order = randomState.permutation(len(strings))
        losses = []
        for start in range(0, len(order), cfg.batchSize):
            batch = order[start:start + cfg.batchSize]
            loss, grads = loss_and_gradients(
                model, [strings[i] for i in batch], labels[batch], params)
            optimizer.update(params, grads)
            losses.append(loss*len(batch))
        trainAcc = accuracy(model, trainData, params)
        testAcc = accuracy(model, testData, params)
        history.append(OrderedDict([("attempt", attempt),
                                    ("epoch", epoch),
                                    ("loss", float(sum(losses)/len(strings))),
                                    ("trainAccuracy", trainAcc),
                                    ("testAccuracy", testAcc)]))
        if cfg.verbose:
            print("attempt "+str(attempt)+" epoch "+str(epoch)+": loss "
                  +str(history[-1]["loss"])+", train "+str(trainAcc)
                  +", test "+str(testAcc))
        if trainAcc >= cfg.trainGate and testAcc >= cfg.testGate:
            break
    return model.withWeights(params)


def train(init, data, cfg, testData=None):
    """Fit a recognizer with BPTT and Adam, restarting from fresh Gaussian
    initializations until the accuracy gates pass or restarts run out.

    Arguments:
        init: the :class:`.RnnModel` of the first attempt

        data: training :class:`.LabeledSample`

        cfg: a :class:`.TrainConfig`

        testData: held-out sample; strings it shares with ``data`` are
    dropped. When None a fifth of the distinct strings of ``data`` is
    held out

    Returns:
        a :class:`.TrainedModel` holding the best attempt
    """
    if init.head != RECOGNIZER:
        raise util.UnsupportedModelError("Training needs a recognizer head")
    if len(data) == 0:
        raise ValueError("Cannot train on an empty sample")
    randomState = fsmx.get_random_state(cfg.seed)
    trainData = data
    if testData is None:
        trainData, testData = _split(data, randomState)
    else:
        testData = disjoint_test_data(testData, trainData)
    history = []
    best = None
    model = init
    for attempt in range(cfg.maxRestarts + 1):
        if attempt > 0:
            model = build_model(init.kind, init.alphabet, init.dim,
                                randomState=randomState, std=cfg.initStd,
                                embeddingDim=init.embeddingDim)
        model = _fit(model, trainData, testData, cfg, randomState, attempt,
                     history)
        trainAcc = accuracy(model, trainData)
        testAcc = accuracy(model, testData)
        passed = trainAcc >= cfg.trainGate and testAcc >= cfg.testGate
        if best is None or (trainAcc + testAcc) > (best[1] + best[2]):
            best = (model, trainAcc, testAcc, attempt, passed)
        if passed or cfg.epochs == 0:
            break
        if cfg.verbose:
            print("attempt "+str(attempt)+" missed the gates, restarting")
    model, trainAcc, testAcc, attempt, passed = best
    return TrainedModel(model, history, trainAcc, testAcc, attempt, passed)


def grad_check(model, data, numParams=100, step=1e-5, seed=fsmx.DEFAULT_SEED):
    """Largest relative gap between the BPTT gradient and central finite
    differences of the loss.

    Up to ``numParams`` weight entries are drawn at random (all of them
    if the model has fewer). The relative error of an entry is
    |a - n| / max(|a|, |n|, 1e-6). For relu cells, entries whose
    one-sided differences disagree sit on a kink and are skipped.
    """
    strings = data.strings
    labels = data.labels
    params = OrderedDict((x, np.array(y)) for (x, y) in model.weights.items())
    _, grads = loss_and_gradients(model, strings, labels, params)
    entries = [(name, i) for name in params for i in range(params[name].size)]
    randomState = fsmx.get_random_state(seed)
    if len(entries) > numParams:
        chosen = randomState.choice(len(entries), size=numParams,
                                    replace=False)
        entries = [entries[i] for i in sorted(chosen)]
    hasKinks = model.kind.activation == "relu"

    def lossAt(name, i, delta):
        flat = params[name].reshape(-1)
        original = flat[i]
        flat[i] = original + delta
        loss = loss_and_gradients(model, strings, labels, params)[0]
        flat[i] = original
        return loss

    worst = 0.0
    for name, i in entries:
        plus = lossAt(name, i, step)
        minus = lossAt(name, i, -step)
        numeric = (plus - minus)/(2*step)
        if hasKinks:
            center = lossAt(name, i, 0.0)
            forward = (plus - center)/step
            backward = (center - minus)/step
            if abs(forward - backward) > 1e-3*max(abs(forward),
                                                  abs(backward), 1e-6):
                continue
        analytic = grads[name].reshape(-1)[i]
        error = abs(analytic - numeric)/max(abs(analytic), abs(numeric),
                                            1e-6)
        worst = max(worst, error)
    return worst
