import numpy as np
import pytest
from hypothesis import strategies as st

SMALL_PRIMES = [3, 5, 7, 11, 13]
PRIMES = [p for p in range(3, 102) if all(p % d for d in range(2, p))]

primes = st.sampled_from(SMALL_PRIMES)


def max_abs(x) -> float:
    return float(np.max(np.abs(x)))


@pytest.fixture(scope="session")
def tables():
    from tensorrank.dualpair import assemble_chartable

    cache = {}

    def get(q, a=1):
        if (q, a) not in cache:
            cache[(q, a)] = assemble_chartable(q, a)
        return cache[(q, a)]

    return get
