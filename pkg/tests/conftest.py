import os
import time

import pytest
from hypothesis import HealthCheck, settings

from _support import ACCEPTANCE_LINES, TIMINGS

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=2000,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def url_strings():
    from ibisdict.urlgen import UrlCorpusConfig, generate_urls

    start = time.perf_counter()
    urls = generate_urls(UrlCorpusConfig(count=100_000, seed=0))
    TIMINGS["url_corpus"] = time.perf_counter() - start
    return urls


@pytest.fixture(scope="session")
def url_corpus(url_strings):
    from ibisdict.core import Corpus

    return Corpus.from_strings(url_strings)[0]


@pytest.fixture(scope="session")
def url_sizes(url_corpus):
    """Serialized size of every variant x {both, left} x {keep, strip} on the URL corpus."""
    from ibisdict.core import build_family
    from ibisdict.io import serialize

    from _support import ORACLE_CONFIGS

    start = time.perf_counter()
    sizes = {d.config.label: len(serialize(d)) for d in build_family(url_corpus, ORACLE_CONFIGS)}
    TIMINGS["url_sizes"] = time.perf_counter() - start
    return sizes


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
