"""Acceptance criteria, one test and one printed PASS/FAIL line each.

Run ``pytest tests/test_acceptance.py`` (or ``python tests/test_acceptance.py``)
to see the thirteen lines; they are printed even when pytest captures output.
"""

import pytest

from qedmagic.verify import CRITERIA, run_criterion


@pytest.mark.parametrize("number", [n for n, _, _ in CRITERIA], ids=lambda n: f"criterion_{n:02d}")
def test_criterion(number, capsys):
    result = run_criterion(number)
    with capsys.disabled():
        print(f"\n{result.line()}  ({result.seconds:.1f} s)")
    assert result.ok, result.line()


if __name__ == "__main__":
    import sys

    results = [run_criterion(n) for n, _, _ in CRITERIA]
    for r in results:
        print(r.line())
    sys.exit(0 if all(r.ok for r in results) else 1)
