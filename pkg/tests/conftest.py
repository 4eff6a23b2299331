from fractions import Fraction

import pytest
from hypothesis import strategies as st

from regasym.counts import CountTable, count_hadamard, reference_table


def small_fractions(max_num=6, max_den=4):
    return st.builds(
        Fraction,
        st.integers(min_value=-max_num, max_value=max_num),
        st.integers(min_value=1, max_value=max_den),
    )


@pytest.fixture(scope="session")
def small_counts():
    """Exact counts for k in {3,4,5} and n <= 10, by the moment formula."""
    table = CountTable()
    for k in (3, 4, 5):
        for n in range(0, 11):
            if (n * k) % 2 == 0:
                table.put(k, n, count_hadamard(k, n), "formula")
    return table


@pytest.fixture(scope="session")
def sg_reference():
    table = CountTable()
    for k in (3, 4, 5):
        table.merge(reference_table("sg", k))
    return table


@pytest.fixture(scope="session")
def csg_reference():
    return {k: reference_table("csg", k) for k in (3, 4)}
