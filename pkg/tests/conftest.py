import numpy as np

from chanceknap.instances import Instance, ProfitModel


def make_tiny_instance(delta=3.0, capacity=7):
    """The 3-item instance used across hand-worked examples:
    mu = (10, 8, 6), w = (5, 4, 3)."""
    return Instance(name="tiny", n=3, capacity=capacity,
                    mus=np.array([10.0, 8.0, 6.0]),
                    weights=np.array([5, 4, 3]),
                    profit_model=ProfitModel(delta=delta))


class ScriptedRng:
    """Random-stream stub: yields scripted uniforms first, then falls back
    to a real generator (or raises when exhausted and no fallback given)."""

    def __init__(self, scripted, fallback_seed=None):
        self._scripted = list(scripted)
        self._fallback = (np.random.default_rng(fallback_seed)
                          if fallback_seed is not None else None)

    def _one(self):
        if self._scripted:
            return self._scripted.pop(0)
        if self._fallback is None:
            raise AssertionError("scripted rng exhausted")
        return float(self._fallback.random())

    def random(self, size=None):
        if size is None:
            return self._one()
        if not self._scripted and self._fallback is not None:
            return self._fallback.random(size)
        if isinstance(size, tuple):
            flat = np.array([self._one() for _ in range(int(np.prod(size)))])
            return flat.reshape(size)
        return np.array([self._one() for _ in range(size)])


class ThetaForcingRng:
    """Returns a fixed value for every scalar draw (the power-law inversion
    draw) and real uniforms for vector draws (the per-bit draws)."""

    def __init__(self, scalar_value, seed=0):
        self._scalar = float(scalar_value)
        self._rng = np.random.default_rng(seed)

    def random(self, size=None):
        if size is None:
            return self._scalar
        return self._rng.random(size)
