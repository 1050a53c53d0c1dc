"""Collects one pass/fail line per acceptance criterion for the terminal summary."""

LINES: dict = {}


def record_criterion(number, passed, detail):
    line = f"CRITERION {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
    LINES[number] = line
    print(line)
    return passed
