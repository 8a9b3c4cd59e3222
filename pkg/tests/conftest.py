import pytest

from cascadecalc.store import ModelStore


@pytest.fixture()
def store(tmp_path):
    return ModelStore(data_dir=tmp_path / "userdata")


@pytest.fixture()
def tagi2043(store):
    return store.get_model("tagi-2043")


@pytest.fixture()
def tagi2100(store):
    return store.get_model("tagi-2100")
