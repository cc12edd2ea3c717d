from pathlib import Path

import pytest

from pcfv.calibration import data_dir

DATA = data_dir()


@pytest.fixture(scope="session")
def data():
    return DATA


@pytest.fixture(scope="session")
def reflexive_model():
    from pcfv.denot import load_model
    return load_model("builtin:reflexive")


@pytest.fixture(scope="session")
def kpoint_model():
    from pcfv.denot import load_model
    return load_model("builtin:kpoint")


@pytest.fixture(scope="session")
def sites():
    from pcfv.site import builtin_sites
    return builtin_sites()


def program_text(name: str) -> str:
    return (DATA / "programs" / name).read_text()


def examples_dir() -> Path:
    return Path(__file__).resolve().parent.parent / "examples"


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
