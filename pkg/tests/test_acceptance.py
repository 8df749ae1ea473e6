"""Acceptance criteria, one test each, at the stated scale and time bound.

Run alone with ``pytest tests/test_acceptance.py -v`` or ``python tests/test_acceptance.py``;
either way one PASS/FAIL line per criterion is printed at the end.
"""

from __future__ import annotations

import sys
import time

import pytest

from ksgroups.checks import CHECKS, CheckResult

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # running as a script from elsewhere
    ACCEPTANCE_LINES = []

# (criterion, checks with their max order, time bound in seconds or None, extra requirement)
CRITERIA = [
    ("fitting-equivalence", [("fitting", 16)], 300, lambda r: r[0].notes["normal_endomorphisms"] > 0),
    ("dichotomy", [("dichotomy", 16)], None,
     lambda r: r[0].notes["kinds"]["Automorphism"] > 0 and r[0].notes["kinds"]["Nilpotent"] > 0),
    ("endo-calculus-closure", [("endo-closure", 12), ("projection-sums", 12)], None,
     lambda r: r[0].notes["present_sums"] > 0 and r[1].notes["products"] > 0),
    ("krull-schmidt-uniqueness", [("ks-uniqueness", 32)], 600, lambda r: r[0].notes["decompositions"] > 0),
    ("cancellation", [("cancellation", 48)], None, lambda r: r[0].notes["cancelled_triples"] > 0),
    ("verbal-product", [("verbal-product", 48)], None, lambda r: r[0].notes["pairs"] > 0),
    ("escaping-factor-bound", [("w-bound", 0)], None, lambda r: r[0].notes["rows"] > 0),
    ("fiber-power-images", [("fiber-power", 0)], 120, lambda r: r[0].notes["located"] >= 5),
    ("oracle-equivalence", [("oracle-equivalence", 12)], None,
     lambda r: r[0].notes["groups"] > 0 and r[0].notes["same_order_pairs"] > 0),
]


def evaluate(criterion: str) -> tuple[bool, str]:
    _, checks, bound, extra = next(c for c in CRITERIA if c[0] == criterion)
    start = time.perf_counter()
    results: list[CheckResult] = [CHECKS[name].run(mo) for name, mo in checks]
    elapsed = time.perf_counter() - start
    ok = all(r.ok for r in results) and extra(results) and (bound is None or elapsed < bound)
    detail = "; ".join(f"{r.name}: {r.checked} checks, {r.failure_count} failures, {r.notes}" for r in results)
    limit = f" (limit {bound}s)" if bound else ""
    line = f"{'PASS' if ok else 'FAIL'}  {criterion:26s} {elapsed:7.1f}s{limit}  {detail}"
    failures = [m for r in results for m in r.failures]
    return ok, line + ("".join(f"\n      {m}" for m in failures[:5]))


@pytest.mark.parametrize("criterion", [c[0] for c in CRITERIA])
def test_criterion(criterion):
    ok, line = evaluate(criterion)
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


if __name__ == "__main__":
    results = [evaluate(c[0]) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
