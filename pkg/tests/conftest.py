from hypothesis import settings

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        title, passed, _ = RESULTS[number]
        terminalreporter.write_line(f"criterion {number}\t{'PASS' if passed else 'FAIL'}\t{title}")
