import re

CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+?)(\[.*\])?$")


def pytest_terminal_summary(terminalreporter):
    results = {}
    for status in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(status, []):
            if rep.when != "call" and status == "passed":
                continue
            m = CRITERION.search(rep.nodeid)
            if m:
                key = (int(m.group(1)), m.group(2).replace("_", " "))
                ok = status == "passed"
                results[key] = results.get(key, True) and ok
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for (n, name), ok in sorted(results.items()):
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {name}")
