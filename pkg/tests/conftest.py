import numpy as np
import pytest

from lfg.synth import make_planted_interaction, make_shellfish, write_csv


@pytest.fixture(scope="session")
def planted():
    return make_planted_interaction(n=300, seed=0)


@pytest.fixture(scope="session")
def shellfish():
    return make_shellfish()


@pytest.fixture(scope="session")
def shellfish_csv(tmp_path_factory, shellfish):
    path = tmp_path_factory.mktemp("data") / "shellfish.csv"
    write_csv(shellfish, path)
    return path


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)
