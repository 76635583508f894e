import random

import pytest

from hypercompress.hypergraph import build


def random_hypergraph(rng: random.Random, n: int, num_edges: int, max_size: int = 3, min_size: int = 2):
    edges = []
    for _ in range(num_edges):
        k = rng.randint(min_size, min(max_size, n))
        edges.append(rng.sample(range(n), k))
    return build(edges, n=n)


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture
def triangle_plus():
    return build([[0, 1], [1, 2], [0, 1, 2]])
