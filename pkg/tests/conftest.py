"""Shared generators for the test suite.

Everything random is drawn from an explicit ``numpy.random.default_rng``
seeded inside each test, so failures reproduce exactly.  Eigenvalue ranges
are moderate by default: the structural identities under test hold at any
conditioning, but closed-form comparisons also spend quadrature budget.
"""

import math

import numpy as np

from spdmeans import PMeasure, SMeasure


def sym(a):
    return 0.5 * (a + a.T)


def rand_spd(rng, dim, lo=0.1, hi=10.0):
    q, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
    d = np.exp(rng.uniform(math.log(lo), math.log(hi), dim))
    return sym((q * d) @ q.T)


def rand_psd(rng, dim, scale=0.3):
    g = rng.standard_normal((dim, dim))
    return scale * sym(g @ g.T)


def rand_weights(rng, k):
    w = rng.uniform(0.5, 1.5, k)
    w = w / w.sum()
    w[-1] = 1.0 - w[:-1].sum()
    return w


def rand_smeasure(rng, nodes=64):
    kind = int(rng.integers(0, 4))
    if kind == 0:
        return SMeasure.dirac(float(rng.uniform(0.0, 1.0)))
    if kind == 1:
        k = int(rng.integers(2, 4))
        v = rand_weights(rng, k)
        return SMeasure.from_atoms(list(zip(rng.uniform(0.0, 1.0, k), v)))
    if kind == 2:
        return SMeasure.lebesgue(nodes)
    return SMeasure.power(float(rng.uniform(0.15, 0.85)), nodes)


def rand_measure(rng, dim, n_atoms=None, nodes=64, lo=0.1, hi=10.0):
    k = n_atoms or int(rng.integers(2, 5))
    w = rand_weights(rng, k)
    return PMeasure(
        [(w[i], rand_spd(rng, dim, lo, hi), rand_smeasure(rng, nodes)) for i in range(k)]
    )


def conditioned_transform(rng, dim, lo=0.5, hi=2.0):
    """Random invertible matrix with singular values in [lo, hi]."""
    q1, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
    q2, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
    sv = np.exp(rng.uniform(math.log(lo), math.log(hi), dim))
    return (q1 * sv) @ q2


def thompson_ball_point(rng, anchor, radius):
    """Random point with Thompson distance at most ``radius`` from the anchor."""
    n = anchor.shape[0]
    w, q = np.linalg.eigh(anchor)
    rs = (q * np.sqrt(w)) @ q.T
    g = sym(rng.standard_normal((n, n)))
    lam, u = np.linalg.eigh(g)
    scale = radius * float(rng.uniform(0.3, 1.0)) / max(abs(lam[0]), abs(lam[-1]))
    return sym(rs @ ((u * np.exp(scale * lam)) @ u.T) @ rs)
