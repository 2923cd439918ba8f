import socket

import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def free_port():
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


@pytest.fixture
def server():
    from qhe_cloud.cloudsvc import ServiceConfig, start_background

    srv = start_background(ServiceConfig(port=free_port(), max_payload_bytes=64 * 1024))
    yield srv
    srv.shutdown()
    srv.server_close()


# -- acceptance reporting: one PASS/FAIL line per criterion ------------------

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion covered by the test")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call" and not (call.when == "setup" and call.excinfo):
        return
    label = marker.args[0]
    ok = call.excinfo is None
    _CRITERIA[label] = _CRITERIA.get(label, True) and ok


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_CRITERIA, key=lambda s: (len(s.split()[0]), s)):
        terminalreporter.write_line(f"{'PASS' if _CRITERIA[label] else 'FAIL'}  {label}")
