import random
from collections import Counter

import numpy as np
import pytest

from chh.datagen import StreamSpec, generate_stream


def zipf_pairs(seed, n, rho=1.1, m1=1024, m2=1024):
    """Small synthetic pair stream as two python-int lists."""
    pairs = generate_stream(StreamSpec(n=n, rho=rho, m1=m1, m2=m2, seed=seed))
    return pairs[:, 0].tolist(), pairs[:, 1].tolist()


def exact_counts(xs, ys):
    return Counter(xs), Counter(zip(xs, ys))


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
