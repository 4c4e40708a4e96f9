import os
from pathlib import Path

import pytest

from ordkit import load_poset, load_sum_family

CORPUS = Path(__file__).resolve().parents[1] / "corpus"

FIGS = ("fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7")


@pytest.fixture(scope="session", autouse=True)
def _isolated_cache(tmp_path_factory):
    """Census caches go to a session tmp dir, not the user's home."""
    old = os.environ.get("ORDKIT_CACHE")
    os.environ["ORDKIT_CACHE"] = str(tmp_path_factory.mktemp("ordkit-cache"))
    yield
    if old is None:
        os.environ.pop("ORDKIT_CACHE", None)
    else:
        os.environ["ORDKIT_CACHE"] = old


@pytest.fixture(scope="session")
def figs():
    out = {}
    for fig in FIGS:
        name, poset = load_poset(CORPUS / f"{fig}.poset")
        assert name == fig
        out[fig] = poset
    return out


@pytest.fixture(scope="session")
def yoked_family():
    return load_sum_family(CORPUS / "yokedexam.sum")


@pytest.fixture(scope="session")
def corpus_dir():
    return CORPUS
