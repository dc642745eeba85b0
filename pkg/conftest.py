import pytest

import qubath.bath.degeneracy as qbdeg


@pytest.fixture(autouse=True)
def isolated_table_cache(monkeypatch):
    # tests never read degeneracy tables cached by earlier runs
    monkeypatch.delenv(qbdeg.CACHE_ENV, raising=False)
