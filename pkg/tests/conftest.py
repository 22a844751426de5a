import re

_CRITERION = re.compile(r"test_criterion_(\d+)")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One verdict line per acceptance criterion.

    A criterion passes when all its tests pass.  A strict-xfail outcome
    marks a criterion whose literal statement fails by design; the
    companion tests carry the corrected property.
    """
    outcomes: dict[int, set] = {}
    for status in ("passed", "failed", "error", "xfailed", "xpassed"):
        for rep in terminalreporter.stats.get(status, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance" not in nodeid:
                continue
            m = _CRITERION.search(nodeid)
            if m:
                outcomes.setdefault(int(m.group(1)), set()).add(status)
    if not outcomes:
        return
    terminalreporter.write_line("")
    terminalreporter.write_line("acceptance criteria:")
    for num in sorted(outcomes):
        st = outcomes[num]
        if st & {"failed", "error", "xpassed"}:
            verdict = "FAIL"
        elif "xfailed" in st:
            verdict = "FAIL as stated (known defect; corrected companion passes)"
        else:
            verdict = "PASS"
        terminalreporter.write_line(f"  criterion {num:2d}: {verdict}")
