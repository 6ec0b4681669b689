import numpy as np


def complex_points(rng, count, radius, n=1):
    """Uniform samples from the disc (or polydisc) of the given radius."""
    r = radius * np.sqrt(rng.uniform(0, 1, (count, n)))
    theta = rng.uniform(0, 2 * np.pi, (count, n))
    return r * np.exp(1j * theta)
