import sys
from pathlib import Path

from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

import acceptance_log  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def pytest_terminal_summary(terminalreporter):
    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(acceptance_log.LINES):
            terminalreporter.write_line(acceptance_log.LINES[k])
