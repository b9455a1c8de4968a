import sys
from pathlib import Path

# make sibling test helpers (_lpref) importable regardless of invocation dir
sys.path.insert(0, str(Path(__file__).parent))


def pytest_terminal_summary(terminalreporter):
    """Echo the acceptance-criteria verdict lines (one per criterion) into
    the run summary, where output capturing cannot hide them."""
    mod = sys.modules.get("test_acceptance")
    verdicts = getattr(mod, "VERDICTS", None)
    if verdicts:
        terminalreporter.section("acceptance criteria")
        for line in verdicts:
            terminalreporter.write_line(line)
