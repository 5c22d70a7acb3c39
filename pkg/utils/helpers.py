import math
from typing import Iterable, List, Sequence

import numpy as np


def complex_to_pair(value: complex) -> List[float]:
    """
    Converts a complex number to the [re, im] pair used in JSON files.

    :param value: The complex number (or real) to convert.
    :return: A two-element list of floats.
    """
    value = complex(value)
    return [float(value.real), float(value.imag)]


def pairs_to_complex(pairs: Iterable[Sequence[float]]) -> np.ndarray:
    """Converts a list of [re, im] pairs to a complex numpy vector."""
    values = []
    for pair in pairs:
        if len(pair) != 2:
            raise ValueError(f"Expected an [re, im] pair, got {list(pair)!r}")
        values.append(complex(float(pair[0]), float(pair[1])))
    return np.asarray(values, dtype=complex)


def json_float(value: float):
    """JSON has no representation for inf/nan, emit null instead."""
    value = float(value)
    if math.isfinite(value):
        return value
    return None


def derived_rng(seed: int, index: int) -> np.random.Generator:
    # One stream per (seed, index) so parallel work is schedule-independent
    return np.random.default_rng([int(seed) & 0xFFFFFFFFFFFFFFFF, int(index)])


def relative_gap(a: complex, b: complex) -> float:
    scale = max(abs(a), abs(b))
    if scale == 0.0:
        return 0.0
    return abs(a - b) / scale
