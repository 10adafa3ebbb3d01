import itertools

import numpy as np
import pytest

from maxdet.constructions import sylvester
from maxdet.orders import build_registry


def cofactor_det(rows):
    """Naive Laplace expansion along the first row."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    return sum(
        (-1) ** j * rows[0][j] * cofactor_det([r[:j] + r[j + 1:] for r in rows[1:]])
        for j in range(n)
    )


def brute_force_switching_excess(H):
    """max entry sum over every row and column sign pattern (no shortcuts)."""
    E = np.asarray(H.entries, dtype=np.int64)
    h = E.shape[0]
    signs = np.array(list(itertools.product((1, -1), repeat=h)), dtype=np.int64)
    # sum_ij r_i E_ij c_j for all (r, c)
    totals = signs @ E @ signs.T
    return int(totals.max())


@pytest.fixture(scope="session")
def syl4():
    return sylvester(2)


@pytest.fixture(scope="session")
def syl8():
    return sylvester(3)


@pytest.fixture(scope="session")
def registry64():
    return build_registry(136, "conjecture")
