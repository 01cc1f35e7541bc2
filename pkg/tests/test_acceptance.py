"""One test per acceptance criterion at its stated tolerance and runtime budget.

Run directly (``python tests/test_acceptance.py``) for the PASS/FAIL lines
alone.
"""

import pytest

from qbl import acceptance

CASES = sorted(acceptance.CRITERIA)


def _id(n):
    return f"c{n:02d}_" + acceptance.CRITERIA[n][2].__name__


@pytest.mark.parametrize("number", CASES, ids=[_id(n) for n in CASES])
def test_criterion(number, capsys, request):
    result = acceptance.run_one(number)
    line = result.line()
    request.config.stash.setdefault(ACCEPTANCE_LINES, []).append(line)
    with capsys.disabled():
        print("\n" + line)
    assert result.passed, result.detail
    assert result.within_budget, f"{result.seconds:.1f}s exceeds {result.budget}s"


ACCEPTANCE_LINES = pytest.StashKey[list]()


if __name__ == "__main__":
    results = acceptance.run()
    for r in results:
        print(r.line())
    raise SystemExit(0 if all(r.ok for r in results) else 1)
