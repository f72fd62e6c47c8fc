import numpy as np
import pytest

from lsic.keyschedule import Key256, derive_schedule
from lsic.latin import LatinSquare

from .helpers import K1_HEX, KNOWN_L4


@pytest.fixture(scope="session")
def L4() -> LatinSquare:
    return LatinSquare.from_cells(KNOWN_L4)


@pytest.fixture(scope="session")
def zero_key() -> Key256:
    return Key256(bytes(32))


@pytest.fixture(scope="session")
def zero_schedule(zero_key):
    return derive_schedule(zero_key)


@pytest.fixture(scope="session")
def k1_schedule():
    return derive_schedule(Key256.from_hex(K1_HEX))


@pytest.fixture
def rng():
    return np.random.default_rng(20131)


_VERDICTS: list[str] = []


@pytest.fixture(scope="session")
def verdict():
    """Record one PASS/FAIL line for an acceptance check and echo it."""

    def record(label: str, ok, detail: str = "") -> bool:
        tag = "INFO" if ok is None else ("PASS" if ok else "FAIL")
        line = f"[{tag}] {label}" + (f": {detail}" if detail else "")
        _VERDICTS.append(line)
        print(line)
        return bool(ok) if ok is not None else True

    return record


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance")
        for line in _VERDICTS:
            terminalreporter.write_line(line)
