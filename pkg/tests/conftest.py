"""Prints one pass/fail line per acceptance criterion after the run."""

ACCEPTANCE_FILE = "test_acceptance.py"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    stats = terminalreporter.stats
    rows = []
    for status in ("passed", "failed", "error"):
        for rep in stats.get(status, []):
            if getattr(rep, "when", "call") != "call":
                continue
            if ACCEPTANCE_FILE not in rep.nodeid:
                continue
            name = rep.nodeid.split("::")[-1]
            if not name.startswith("test_criterion_"):
                continue
            number = int(name.split("_")[2])
            label = " ".join(name.split("_")[3:])
            rows.append((number, label, "PASS" if status == "passed" else "FAIL"))
    if not rows:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for number, label, verdict in sorted(rows):
        terminalreporter.write_line(f"criterion {number:2d} [{verdict}] {label}")
