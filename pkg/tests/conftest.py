import pytest

import latsym as ls

ACCEPTANCE_LINES = []


def record_acceptance(line):
    ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def store():
    """Memoized lattices, groups and orbit tables shared across the session.

    The 2^24-2^25 enumerations take minutes; every test that needs one goes
    through here so each is computed at most once per run.
    """
    lattices = {}
    groups = {}
    tables = {}
    timings = {}

    class Store:
        def lattice(self, spec):
            if spec not in lattices:
                lattices[spec] = ls.from_spec(spec)
            return lattices[spec]

        def group(self, spec):
            if spec not in groups:
                import time
                t0 = time.time()
                groups[spec] = ls.automorphisms(self.lattice(spec))
                timings.setdefault(spec, 0.0)
                timings[spec] += time.time() - t0
            return groups[spec]

        def table(self, spec, q=2):
            key = (spec, q)
            if key not in tables:
                import time
                group = self.group(spec)
                t0 = time.time()
                tables[key] = ls.enumerate_orbits(self.lattice(spec), group, q=q)
                timings.setdefault(spec, 0.0)
                timings[spec] += time.time() - t0
            return tables[key]

        def elapsed(self, spec):
            return timings.get(spec, 0.0)

    return Store()
