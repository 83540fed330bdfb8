import math

import numpy as np
import pytest

from phantomspline.grid import get_source

BUILTIN_IDS = ("ramp", "sine75", "exp02")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=BUILTIN_IDS)
def builtin_function(request):
    return get_source(request.param)


def series_oracle(y, r, depth, t):
    """Spline value straight from the alias-series formula, with scalar loops."""
    M = len(y)
    n = (M - 1) // 2
    tau = [2 * math.pi * i / M for i in range(M)]
    a = [2 / M * sum(y[i] * math.cos(j * tau[i]) for i in range(M)) for j in range(n + 1)]
    b = [0.0] + [2 / M * sum(y[i] * math.sin(j * tau[i]) for i in range(M)) for j in range(1, n + 1)]
    s = r + 1
    out = a[0] / 2
    for j in range(1, n + 1):
        H = sum((m * M + j) ** -s + ((m + 1) * M - j) ** -s for m in range(depth + 1))
        for m in range(depth + 1):
            u, d = m * M + j, (m + 1) * M - j
            out += (
                a[j] * (math.cos(u * t) / u**s + math.cos(d * t) / d**s)
                + b[j] * (math.sin(u * t) / u**s - math.sin(d * t) / d**s)
            ) / H
    return out
