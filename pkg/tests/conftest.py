import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("repo", deadline=None, max_examples=40, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_KEY = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[ACCEPTANCE_KEY] = {"titles": {}, "parts": {}}


@pytest.fixture(scope="session")
def acceptance_log(request):
    return request.config.stash[ACCEPTANCE_KEY]


def pytest_terminal_summary(terminalreporter, config):
    log = config.stash.get(ACCEPTANCE_KEY, None)
    if not log or not log["parts"]:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(log["titles"]):
        parts = log["parts"].get(crit, [])
        if not parts:
            status = "NOT RUN"
        else:
            status = "PASS" if all(ok for _, ok, _ in parts) else "FAIL"
        detail = "; ".join(f"{name} {'ok' if ok else 'FAIL'} {info}" for name, ok, info in parts)
        terminalreporter.write_line(f"criterion {crit:2d} {log['titles'][crit]}: {status}  [{detail}]")
