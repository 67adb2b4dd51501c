import numpy as np
import pytest

from frameinpaint.grid import freqs, idft_array
from frameinpaint.meyer import MeyerFrame
from frameinpaint.shearlet import ShearletFrame

ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture
def report():
    def record(k, ok, detail):
        ACCEPTANCE[k] = (bool(ok), detail)
        print(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
        return ok
    return record


def bandlimited(n, rng, frac=0.25, real=True):
    """Random grid whose spectrum lives in |xi|_inf <= frac * n."""
    f = freqs(n)
    keep = np.abs(f) <= frac * n
    S = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    S *= np.outer(keep, keep)
    g = idft_array(S)
    return g.real.copy() if real else g


@pytest.fixture(scope="session")
def meyer32():
    return MeyerFrame(32, 2, 6)


@pytest.fixture(scope="session")
def meyer64():
    return MeyerFrame(64, 2, 8, clip=True)


@pytest.fixture(scope="session")
def shear64():
    return ShearletFrame(64, 0, 4, clip=True)


@pytest.fixture(scope="session")
def shear32():
    return ShearletFrame(32, 0, 2)
