import os
import random
import sys

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "fixtures")


@pytest.fixture
def fixtures_dir():
    return FIXTURES


def fixture_path(name):
    return os.path.join(FIXTURES, name)


@pytest.fixture
def rng():
    return random.Random(20130206)


def random_relation(rng, elements):
    from relknot.relation import BinaryRelation

    n = len(elements)
    return BinaryRelation(
        elements, [[rng.randint(0, 1) for _ in range(n)] for _ in range(n)]
    )
