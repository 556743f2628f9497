"""The eleven acceptance criteria, each at its stated tolerance and runtime budget.

Every test prints one PASS/FAIL line (visible with ``pytest -s`` or in the
captured output on failure).
"""
import functools

import pytest

from torsor.suite import CRITERIA, _run, format_line


@functools.lru_cache(maxsize=None)
def _composition_run():
    return {c["id"]: c for c in _run([1, 2])}


def _result(n):
    if n in (1, 2):
        return _composition_run()[n]
    return _run([n])[0]


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n, capsys):
    res = _result(n)
    with capsys.disabled():
        print("\n" + format_line(res))
    assert res["correct"], res["details"]
    if res["budget_seconds"] is not None:
        assert res["seconds"] <= res["budget_seconds"], f"over budget: {res['seconds']}s"
    assert res["passed"]
