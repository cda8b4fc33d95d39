"""Acceptance criteria: one printed PASS/FAIL line per criterion."""

import pytest

from lightlike.acceptance import CRITERIA, format_line, run_criterion


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_acceptance(k, request):
    title, ok, detail = run_criterion(k)
    line = format_line(k, title, ok, detail)
    print(line)
    lines = getattr(request.config, "_acceptance_lines", [])
    lines.append(line)
    request.config._acceptance_lines = lines
    assert ok, line
