import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from matroidlab.bits import elements, to_mask  # noqa: E402


def fsets(masks):
    return {frozenset(elements(b)) for b in masks}


def masks(*sets):
    return [to_mask(s) for s in sets]


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[number])
