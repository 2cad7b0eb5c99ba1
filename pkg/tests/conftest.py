import math

import numpy as np
import pytest

from hxr.parabolic import ProfileParams


def random_params(rng, count, width_cap=math.exp(-1.0)):
    """Profile parameters with c1, c2 < 0 and t2 - t1 <= width_cap."""
    out = []
    for _ in range(count):
        c1 = -rng.uniform(0.2, 3.0)
        c2 = -rng.uniform(0.2, 3.0)
        t1 = rng.uniform(-2.0, 2.0)
        w = rng.uniform(0.05, width_cap)
        out.append(ProfileParams(c1, c2, t1, t1 + w))
    return out


def random_half_space(rng, n, size=None):
    shape = (n,) if size is None else (size, n)
    x = rng.uniform(-3.0, 3.0, size=shape)
    x[..., -1] = np.exp(rng.uniform(-2.0, 2.0, size=shape[:-1]))
    return x


def random_ball(rng, n, size=None):
    shape = (n,) if size is None else (size, n)
    y = rng.normal(size=shape)
    y /= np.linalg.norm(y, axis=-1, keepdims=True)
    r = rng.uniform(0.0, 0.95, size=shape[:-1])
    return y * np.asarray(r)[..., None]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def standard_params():
    return ProfileParams(-1.0, -1.0, 0.0, math.exp(-1.0))


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
