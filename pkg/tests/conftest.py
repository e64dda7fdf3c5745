_criteria = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.split("::")[-1]
    if "test_acceptance.py" in report.nodeid and name.startswith("test_criterion_"):
        if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
            _criteria[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria, key=lambda n: int(n.split("_")[2])):
        status = "PASS" if _criteria[name] == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}  {name}")
