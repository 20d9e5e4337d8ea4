from hypothesis import settings

settings.register_profile("thzlink", deadline=None, max_examples=200)
settings.load_profile("thzlink")


def pytest_terminal_summary(terminalreporter):
    import sys

    for name, module in list(sys.modules.items()):
        if name.rsplit(".", 1)[-1] == "test_acceptance" and getattr(module, "RESULTS", None):
            terminalreporter.section("acceptance criteria")
            for line in module.RESULTS:
                terminalreporter.write_line(line)
