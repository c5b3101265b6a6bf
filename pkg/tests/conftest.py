import random

import pytest

from dwpf import BracketParams

LAMBDAS = (1.0 + 0j, 0.7 + 0.2j)


@pytest.fixture
def params():
    return BracketParams(lam=1.0)


@pytest.fixture
def params_complex():
    return BracketParams(lam=0.7 + 0.2j)


def draw_box(rng, n):
    return [complex(rng.uniform(-1.0, 1.0), rng.uniform(-0.5, 0.5))
            for _ in range(n)]


def generic_pair(rng, p, k, L):
    """Rapidity draw accepted by the library's genericity test."""
    from dwpf.determinant import _require_generic
    from dwpf.errors import DegenerateRapidities
    while True:
        xs, ys = draw_box(rng, L), draw_box(rng, L)
        try:
            _require_generic(p, k, xs, ys)
            return xs, ys
        except DegenerateRapidities:
            continue


def rel_err(a, b):
    a, b = complex(a), complex(b)
    denom = max(abs(a), abs(b), 1e-300)
    return abs(a - b) / denom


@pytest.fixture
def rng():
    return random.Random(20240801)
