from __future__ import annotations

from pathlib import Path

import pytest

from blockseq import boolean_sqs, hamming_sts, parse_design, skolem_sts

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fano():
    return hamming_sts(3)


@pytest.fixture(scope="session")
def sts9():
    return parse_design(FIXTURES / "sts9.design")


@pytest.fixture(scope="session")
def sqs8():
    return boolean_sqs(3)


@pytest.fixture(scope="session")
def skolem6():
    return skolem_sts(6)


@pytest.fixture(scope="session")
def skolem10():
    return skolem_sts(10)
