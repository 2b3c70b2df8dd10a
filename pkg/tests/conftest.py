import io

import pytest
from hypothesis import strategies as st

from src.app import main
from src.models.ep_word import EpWord
from src.models.spec_parser import load_spec


bits = st.integers(min_value=0, max_value=1)


@st.composite
def epwords(draw, max_prefix: int = 6, max_period: int = 5):
    prefix = draw(st.lists(bits, max_size=max_prefix))
    period = draw(st.lists(bits, min_size=1, max_size=max_period))
    return EpWord.of(prefix, period)


@pytest.fixture
def zip_alt():
    return load_spec("zip_alt")


@pytest.fixture
def run_cli(capsys):
    """Runs the command line in-process; returns (exit status, stdout)."""
    def run(*argv: str):
        status = main(list(argv))
        return status, capsys.readouterr().out
    return run


@pytest.fixture
def text_stream():
    return io.StringIO()
