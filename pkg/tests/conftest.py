import time

import pytest

import helpers


class Corpus:
    """Shared rule corpus: 500 selective-softmax rules plus 500 perturbations."""

    def __init__(self) -> None:
        t0 = time.perf_counter()
        self.rules = helpers.build_corpus(500, 500, seed=20260815)
        self.build_seconds = time.perf_counter() - t0


@pytest.fixture(scope="session")
def corpus() -> Corpus:
    return Corpus()


@pytest.fixture(scope="session")
def announce(pytestconfig):
    """Print a line on the live terminal even while capture is active."""
    capman = pytestconfig.pluginmanager.getplugin("capturemanager")

    def _announce(line: str) -> None:
        if capman is not None:
            with capman.global_and_fixture_disabled():
                print(line, flush=True)
        else:
            print(line, flush=True)

    return _announce
