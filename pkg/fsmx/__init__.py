from numpy import random

#extend the RandomState to have a random() func,
# for compatibility with np.random
class ExtendedRandomState(random.RandomState):

    def random(self):
        return self.rand(1)[0]

random = ExtendedRandomState()
random.seed(1)

DEFAULT_SEED = 42


def get_random_state(seed=None):
    """Fresh random state for one operation.

    Arguments:
        seed: int; ``None`` falls back to ``DEFAULT_SEED``
    """
    return ExtendedRandomState(DEFAULT_SEED if seed is None else seed)
