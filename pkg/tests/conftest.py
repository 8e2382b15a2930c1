import itertools

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=40, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
settings.load_profile("default")


def brute_hull_distance(q, V):
    """Exact distance from ``q`` to conv(V) by enumerating simplices of vertices.

    The nearest point lies in the relative interior of a simplex spanned by at
    most ``dim + 1`` of the points, where it is the affine projection of ``q``.
    """
    q = np.asarray(q, dtype=float)
    V = np.atleast_2d(np.asarray(V, dtype=float))
    best, arg = np.inf, None
    for k in range(1, min(len(V), V.shape[1] + 1) + 1):
        for sub in itertools.combinations(range(len(V)), k):
            S = V[list(sub)]
            if k == 1:
                p, ok = S[0], True
            else:
                E = (S[1:] - S[0]).T
                coef, *_ = np.linalg.lstsq(E, q - S[0], rcond=None)
                lam = np.concatenate([[1 - coef.sum()], coef])
                ok = np.all(lam >= -1e-12)
                p = S[0] + E @ coef
            if ok:
                d = float(np.linalg.norm(q - p))
                if d < best:
                    best, arg = d, p
    return best, arg


def rotation(dim, rng):
    """Random orthogonal matrix with determinant one."""
    Q, R = np.linalg.qr(rng.normal(size=(dim, dim)))
    Q = Q * np.sign(np.diag(R))
    if np.linalg.det(Q) < 0:
        Q[:, 0] = -Q[:, 0]
    return Q


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE:
        terminalreporter.write_line(line)
