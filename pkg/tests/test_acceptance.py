"""Acceptance suite: every quantitative criterion at its stated tolerance.

Each test prints the criterion's pass/fail line (visible with -s or in the
failure report) and asserts it passed.  The same checks back the service's
/verify endpoint and the CLI's ``verify`` command.
"""

import pytest

from anisodrop import acceptance


@pytest.mark.parametrize("index", range(1, 13), ids=lambda i: f"criterion_{i:02d}")
def test_criterion(index):
    (result,) = acceptance.run_acceptance([index])
    print(result.line())
    assert result.passed, result.line()
