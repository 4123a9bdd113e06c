"""Shared fixtures: small reference designs, built once per session."""

import pytest

from unitiso.designs import Design, admissible_bm_pairs, construct_bm, construct_hermitian
from unitiso.designs import construct_order2_unital

# the seven-point plane, its lines listed by hand
FANO_BLOCKS = [
    (0, 1, 3),
    (1, 2, 4),
    (2, 3, 5),
    (3, 4, 6),
    (0, 4, 5),
    (1, 5, 6),
    (0, 2, 6),
]


@pytest.fixture(scope="session")
def fano():
    return Design(7, FANO_BLOCKS, {"kind": "imported", "name": "fano"})


@pytest.fixture(scope="session")
def u2():
    return construct_order2_unital()


@pytest.fixture(scope="session")
def herm3():
    return construct_hermitian(3)


@pytest.fixture(scope="session")
def herm4():
    return construct_hermitian(4)


@pytest.fixture(scope="session")
def bm3_pairs():
    return admissible_bm_pairs(3)


@pytest.fixture(scope="session")
def bm3(bm3_pairs):
    alpha, beta = bm3_pairs[0]
    return construct_bm(3, alpha, beta)


@pytest.fixture(scope="session")
def bm3_subfield(bm3_pairs):
    # first admissible pair whose beta sits in the base field
    alpha, beta = next((a, b) for a, b in bm3_pairs if b < 3)
    return construct_bm(3, alpha, beta)
