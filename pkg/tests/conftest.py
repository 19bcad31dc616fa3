import math
import random

import pytest

from littlewood import QuadraticSurd

NONSQUARES = [d for d in range(2, 120) if math.isqrt(d) ** 2 != d]


def random_surd(rng: random.Random, unit_interval: bool = False) -> QuadraticSurd:
    """Random canonical surd; optionally reduced mod 1 into (0, 1)."""
    d = rng.choice(NONSQUARES)
    p = rng.randint(-20, 20)
    q = rng.choice([i for i in range(-12, 13) if i])
    x = QuadraticSurd(p, d, q)
    if unit_interval:
        x = x - x.floor()
    return x


@pytest.fixture
def rng():
    return random.Random(20260811)
