import numpy as np
import pytest
from hypothesis import settings, strategies as st

from paulicomp import encode_context, parse_pauli_string

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")

pauli_text = st.text(alphabet="IXYZ", min_size=1, max_size=10)

ACCEPTANCE_LINES = []


@pytest.fixture
def ctx_of():
    return lambda text: encode_context(parse_pauli_string(text))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
