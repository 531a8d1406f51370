import numpy as np
import pytest

from rotor_bss.signals import MultichannelSignal, gen_sinusoid

PAPER_A = np.array([[0.4684, 0.1952], [0.7384, 0.5483]])


def two_sines(n=1000, rate=1000.0, freqs=(10.0, 25.0)):
    return MultichannelSignal.stack(gen_sinusoid(f, 1.0, 0.0, rate, n) for f in freqs)


@pytest.fixture
def sources():
    return two_sines()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_spd(rng, n, shift=0.1):
    B = rng.standard_normal((n, n))
    return B @ B.T + shift * np.eye(n)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda l: int(l.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
