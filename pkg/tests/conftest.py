import functools
import sys

import numpy as np
import pytest

import swarm_cluster.cli  # noqa: F401  (load every module before patching)
import swarm_cluster.harness.runner  # noqa: F401
from swarm_cluster import clustering, optimizer
from swarm_cluster.metrics import TraceError, check_trace

CRITERIA = {
    1: "boundary invariant over 10,000 random optimizer steps (< 10 s)",
    2: "every emitted gbest trace is non-increasing",
    3: "sphere-10 median < 1e-3 and rastrigin-5 <= random search (< 30 s)",
    4: "subtractive recovery of 3 blobs (k=3 in >= 9/10, centers within 0.1)",
    5: "tiny instances: best-of-40 kmeans hits the exhaustive Lloyd optimum, assignment exact",
    6: "error rate equals brute-force permutation matching (50 fixtures)",
    7: "iris: SC-BR-APSO median SICD <= kmeans, matching error <= 0.25 (< 2 min)",
    8: "bundled datasets match their descriptors (n, d, C)",
    9: "run twice gives byte-identical reports (wall_ms excluded)",
}

_results: dict[int, tuple[bool, str]] = {}
TRACES = {"checked": 0, "violations": []}


def validate_trace(values, source: str) -> None:
    """Session-wide trace validator (criterion 2)."""
    TRACES["checked"] += 1
    try:
        check_trace(values)
    except TraceError as exc:
        TRACES["violations"].append(f"{source}: {exc}")
        raise


def _checked(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        res = fn(*args, **kwargs)
        validate_trace([r.gbest_fitness for r in res.trace], fn.__name__)
        return res

    return wrapper


def _install_trace_validator():
    # Rebind every reference already held by package modules; test modules
    # are imported after this file, so they pick up the wrapped versions too.
    originals = [optimizer.optimize, clustering.kmeans]
    wrapped = {id(f): _checked(f) for f in originals}
    for name, mod in list(sys.modules.items()):
        if not name.startswith("swarm_cluster"):
            continue
        for attr, value in list(vars(mod).items()):
            if id(value) in wrapped and any(value is f for f in originals):
                setattr(mod, attr, wrapped[id(value)])


_install_trace_validator()


@pytest.fixture
def criterion():
    def record(number: int, ok: bool, detail: str) -> bool:
        _results[number] = (bool(ok), detail)
        return bool(ok)

    return record


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_sessionfinish(session, exitstatus):
    if TRACES["violations"] and session.exitstatus == 0:
        session.exitstatus = 1


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n, text in CRITERIA.items():
        if n not in _results:
            tr.write_line(f"criterion {n}: NOT RUN  {text}")
            continue
        ok, detail = _results[n]
        if n == 2:
            ok = ok and not TRACES["violations"]
            detail += f"; session-wide {TRACES['checked']} traces, {len(TRACES['violations'])} violations"
        tr.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {text}  [{detail}]")
