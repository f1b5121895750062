import pytest

from hppk import kat
from hppk.block import encrypt_block, keypair_from_values
from hppk.params import PARAMETER_SETS


@pytest.fixture(scope="session")
def toy_params():
    return PARAMETER_SETS["toy"]


@pytest.fixture(scope="session")
def toy_keypair(toy_params):
    return keypair_from_values(
        toy_params,
        kat.TOY_MODULUS,
        kat.TOY_R1,
        kat.TOY_R2,
        kat.TOY_F1,
        kat.TOY_F2,
        kat.TOY_BASE,
    )


@pytest.fixture(scope="session")
def toy_block(toy_params, toy_keypair):
    _, pk = toy_keypair
    return encrypt_block(pk, toy_params, kat.TOY_SECRET, kat.TOY_NOISE)
