"""Shared fixtures: pinned point clouds and the expensive J=8 partition.

The big partition is built once per session; its build time is recorded
so the acceptance test can assert the runtime budget without rebuilding.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction

import pytest

from incidence4.partition import PartitionParams, build_partition

PINNED_POINT_SEED = 20240808
PARTITION_SEED = 11


def pinned_points(count: int = 1024, bound: int = 50, seed: int = PINNED_POINT_SEED):
    rng = random.Random(seed)
    return [tuple(rng.randint(-bound, bound) for _ in range(4)) for _ in range(count)]


@pytest.fixture(scope="session")
def big_partition():
    """(points, partition, build_seconds) for 1024 points, J=8, delta=0.1."""
    points = pinned_points()
    params = PartitionParams(8, Fraction(1, 10))
    start = time.monotonic()
    part = build_partition(points, params, seed=PARTITION_SEED)
    elapsed = time.monotonic() - start
    return points, part, elapsed


@pytest.fixture(scope="session")
def collinear_fixture():
    """The 8 collinear points and their explicit degree-7 partition."""
    from incidence4.exactpoly import poly4

    def shifted(c):
        return poly4({(1, 0, 0, 0): 1, (0, 0, 0, 0): -Fraction(c)})

    def product(*ps):
        out = poly4({(0, 0, 0, 0): 1})
        for p in ps:
            out = out * p
        return out

    from incidence4.partition import PartitionPolynomial

    points = [(i, 0, 0, 0) for i in range(1, 9)]
    part = PartitionPolynomial(
        (
            shifted(Fraction(9, 2)),
            product(shifted(Fraction(5, 2)), shifted(Fraction(13, 2))),
            product(
                shifted(Fraction(3, 2)),
                shifted(Fraction(7, 2)),
                shifted(Fraction(11, 2)),
                shifted(Fraction(15, 2)),
            ),
        )
    )
    return points, part
