import cmath

import numpy as np
import pytest

from vilenkin import _backend
from vilenkin.radix import make_radix_sequence


@pytest.fixture(params=_backend.available())
def backend(request):
    with _backend.use_backend(request.param):
        yield request.param


def brute_char(R, n, x):
    """xi_n(x) as a product of per-digit exponentials (no shared phase code)."""
    value = 1.0 + 0j
    for m, nd, xd in zip(R.radices, R.index_digits(n), R.index_digits(x)):
        value *= cmath.exp(2j * cmath.pi * nd * xd / m)
    return value


def brute_table(R):
    M = R.size
    return np.array([[brute_char(R, n, x) for x in range(M)] for n in range(M)])


def brute_coeffs(R, f):
    return brute_table(R).conj() @ np.asarray(f) / R.size


def brute_partial_sums(R, f):
    """Row j-1 holds S_j f for j = 1..M (direct character sums)."""
    chi = brute_table(R)
    c = chi.conj() @ np.asarray(f) / R.size
    return np.cumsum(c[:, None] * chi, axis=0)


def brute_convolve(R, f, k):
    M = R.size
    out = np.zeros(M, dtype=complex)
    for x in range(M):
        for y in range(M):
            out[x] += f[y] * k[int(R.sub_indices(x, y))]
    return out / M


def random_function(rng, M):
    return rng.normal(size=M) + 1j * rng.normal(size=M)


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


SMALL_RADICES = [(2, 2, 2), (2, 3), (3, 2, 2), (2, 3, 4), (5,), (4, 3)]


@pytest.fixture(params=SMALL_RADICES, ids=lambda r: "x".join(map(str, r)))
def small_R(request):
    return make_radix_sequence(request.param)


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion(request):
    """Record one pass/fail line per acceptance criterion."""
    def record(label, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} {label}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
