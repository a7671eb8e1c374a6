"""Collects one verdict line per acceptance criterion for the terminal summary."""

LINES: dict[int, str] = {}


def record(number: int, checks: list[tuple[str, bool]]) -> None:
    """Record the outcome of criterion ``number`` and fail if any check failed."""
    failed = [label for label, ok in checks if not ok]
    if failed:
        line = f"criterion {number}: FAIL ({'; '.join(failed)})"
    else:
        line = f"criterion {number}: PASS ({len(checks)} checks)"
    LINES[number] = line
    print(line)
    assert not failed, line
