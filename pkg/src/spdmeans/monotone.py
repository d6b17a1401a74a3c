"""Operator monotone function families and their representing measures.

Every normalized operator monotone function used by the solvers is a
probability mixture of the rational kernels

    log_kernel(s, x)      = (x - 1) / ((1 - s) x + s)          on s in [0, 1]
    harmonic_kernel(s, x) = ((1 - s) + s / x)^-1

so a measure on [0, 1] *is* the function: Dirac measures give single
kernels, Lebesgue measure gives ``log``, and the power density
``s^t (1-s)^(-t) sin(t pi)/(t pi)`` gives ``(x^t - 1)/t``.  An
:class:`SMeasure` stores the measure as a quadrature rule (nodes, weights),
which makes every downstream integral a weighted sum over nodes.

Continuous kinds are discretized once at construction: Lebesgue measure and
custom densities by Gauss-Legendre, the power density by a Gauss-Jacobi
rule matched to its endpoint singularity at s = 1 (plain Gauss-Legendre
loses five to eight digits there; the Jacobi rule is exact for the mass and
spectrally accurate for the kernels).
"""

from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi

from .core import _sym, spectral, sqrt_pair
from .errors import DomainError, MeasureError

DEFAULT_NODES = 64


# ---------------------------------------------------------------------------
# scalar kernels (vectorized over numpy arrays; 2-d input means spectral)
# ---------------------------------------------------------------------------


def _is_matrix(x):
    return isinstance(x, np.ndarray) and x.ndim == 2


def _spectral_apply(x, scalar_fn):
    w, q = spectral(x)
    if np.any(w <= 0.0):
        raise DomainError("matrix argument must be positive definite")
    return _sym((q * scalar_fn(w)) @ q.T)


def _check_s(s):
    if not 0.0 <= s <= 1.0:
        raise DomainError(f"kernel parameter s must lie in [0, 1], got {s}")


def _check_st(s, t):
    _check_s(s)
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"kernel parameter t must lie in [0, 1], got {t}")


def log_kernel(s, x):
    """Kernel ``(x - 1)/((1 - s) x + s)``; s = 0 gives ``1 - 1/x``, s = 1 gives ``x - 1``.

    Accepts a positive scalar or an SPD matrix (applied spectrally).
    Mixtures of these kernels over s in [0, 1] are exactly the operator
    monotone functions vanishing at 1 with unit derivative there, pinched
    between ``1 - 1/x`` and ``x - 1``.
    """
    _check_s(s)
    if _is_matrix(x):
        return _spectral_apply(x, lambda w: log_kernel_grid(np.asarray([s]), w)[0])
    if x <= 0.0:
        raise DomainError("scalar argument must be positive")
    return float((x - 1.0) / ((1.0 - s) * x + s))


def log_kernel_grid(s, x):
    """Vectorized ``log_kernel`` on an outer grid: s of shape (m,), x of shape (k,)."""
    s = np.asarray(s, dtype=float)[:, None]
    x = np.asarray(x, dtype=float)[None, :]
    return (x - 1.0) / ((1.0 - s) * x + s)


def log_kernel_inv(s, y) -> float:
    """Inverse of ``log_kernel(s, .)``: ``1 + y / (1 - (1 - s) y)``.

    Defined for ``y < 1/(1 - s)`` when s < 1; for s = 1 any y maps to y + 1.
    """
    _check_s(s)
    if s < 1.0 and y >= 1.0 / (1.0 - s):
        raise DomainError(f"y = {y} outside the range of the kernel at s = {s}")
    return float(1.0 + y / (1.0 - (1.0 - s) * y))


def harmonic_kernel(s, x):
    """Kernel ``((1 - s) + s/x)^-1``; s = 0 is the left trivial mean, s = 1 the right."""
    _check_s(s)
    if _is_matrix(x):
        return _spectral_apply(x, lambda w: x_over_affine(s, w))
    if x <= 0.0:
        raise DomainError("scalar argument must be positive")
    return float(x / ((1.0 - s) * x + s))


def x_over_affine(s, w):
    """Elementwise ``harmonic_kernel`` on an eigenvalue array."""
    return w / ((1.0 - s) * w + s)


def _mean_coeffs(s, t):
    # Moebius coefficients of the two-parameter mean kernel
    alpha = (1.0 - t) * (1.0 - s) + t
    beta = s * (1.0 - t)
    gamma = (1.0 - t) * (1.0 - s)
    delta = t + s * (1.0 - t)
    return alpha, beta, gamma, delta


def mean_kernel(s, t, x):
    """Two-parameter operator mean kernel.

    ``mean_kernel(s, t, x) = ([(1-t)(1-s)+t] x + s(1-t)) / ((1-t)(1-s) x + t + s(1-t))``,
    equal to ``log_kernel_inv(s, t * log_kernel(s, x))``.  Endpoints:
    ``t = 0`` maps everything to 1, ``t = 1`` is the identity.  The family
    is a semigroup in t: composing t1 and t2 gives ``t1 * t2``.
    """
    _check_st(s, t)
    alpha, beta, gamma, delta = _mean_coeffs(s, t)
    if _is_matrix(x):
        return _spectral_apply(x, lambda w: (alpha * w + beta) / (gamma * w + delta))
    if x <= 0.0:
        raise DomainError("scalar argument must be positive")
    return float((alpha * x + beta) / (gamma * x + delta))


def mean_kernel_inv(s, t, y) -> float:
    """Inverse of ``mean_kernel(s, t, .)`` on its range; DomainError outside.

    Computed as the Moebius inverse ``(delta y - beta) / (alpha - gamma y)``
    of the kernel's coefficient matrix.
    """
    _check_st(s, t)
    alpha, beta, gamma, delta = _mean_coeffs(s, t)
    den = alpha - gamma * y
    if den <= 0.0:
        raise DomainError(f"y = {y} outside the range of the mean kernel")
    x = (delta * y - beta) / den
    if x <= 0.0:
        raise DomainError(f"y = {y} outside the range of the mean kernel")
    return float(x)


# ---------------------------------------------------------------------------
# representing measures on [0, 1]
# ---------------------------------------------------------------------------


@lru_cache(maxsize=32)
def _legendre_01(n):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


@lru_cache(maxsize=64)
def _jacobi_01(n, t):
    # weight (1-u)^(-t) (1+u)^t on [-1,1]; mapped to s^t (1-s)^(-t) on [0,1]
    x, w = roots_jacobi(n, -t, t)
    return 0.5 * (x + 1.0), 0.5 * w


def _frozen(a):
    a = np.asarray(a, dtype=float)
    a.setflags(write=False)
    return a


class SMeasure:
    """Probability measure on [0, 1], stored as a quadrature rule.

    Build one with :meth:`dirac`, :meth:`from_atoms`, :meth:`lebesgue`,
    :meth:`power` or :meth:`custom`.  ``nodes`` and ``weights`` are
    read-only arrays with ``sum(weights) = 1`` up to the quadrature scheme,
    and every integral against the measure is ``sum(weights * g(nodes))``.
    """

    __slots__ = ("kind", "params", "nodes", "weights")

    def __init__(self, kind, params, nodes, weights):
        self.kind = kind
        self.params = params
        self.nodes = _frozen(nodes)
        self.weights = _frozen(weights)

    # -- factories ---------------------------------------------------------

    @classmethod
    def dirac(cls, s: float) -> "SMeasure":
        """Point mass at ``s`` in [0, 1]."""
        if not 0.0 <= s <= 1.0:
            raise MeasureError(f"dirac location must lie in [0, 1], got {s}")
        return cls("dirac", {"s": float(s)}, [s], [1.0])

    @classmethod
    def from_atoms(cls, points) -> "SMeasure":
        """Finite atomic measure from ``[(s_j, v_j), ...]`` with positive v summing to 1."""
        pts = [(float(s), float(v)) for s, v in points]
        if not pts:
            raise MeasureError("atomic measure needs at least one atom")
        s = np.array([p[0] for p in pts])
        v = np.array([p[1] for p in pts])
        if np.any(s < 0.0) or np.any(s > 1.0):
            raise MeasureError("atom locations must lie in [0, 1]")
        if np.any(v <= 0.0):
            raise MeasureError("atom weights must be positive")
        if abs(v.sum() - 1.0) > 1e-12:
            raise MeasureError(f"atom weights must sum to 1, got {v.sum()!r}")
        return cls("atoms", {"points": tuple(pts)}, s, v)

    @classmethod
    def lebesgue(cls, nodes: int = DEFAULT_NODES) -> "SMeasure":
        """Uniform measure ds; the represented monotone function is ``log``."""
        if nodes < 1:
            raise MeasureError("node count must be positive")
        x, w = _legendre_01(int(nodes))
        return cls("lebesgue", {"nodes": int(nodes)}, x, w)

    @classmethod
    def power(cls, t: float, nodes: int = DEFAULT_NODES) -> "SMeasure":
        """Density ``s^t (1-s)^(-t) sin(t pi)/(t pi)`` for t in (0, 1).

        Represents ``(x^t - 1)/t``.  Discretized by a Gauss-Jacobi rule for
        the endpoint singularity, so the total mass is exact and kernel
        integrals converge spectrally.
        """
        if not 0.0 < t < 1.0:
            raise MeasureError(f"power parameter must lie in (0, 1), got {t}")
        if nodes < 1:
            raise MeasureError("node count must be positive")
        x, w = _jacobi_01(int(nodes), float(t))
        scale = np.sin(t * np.pi) / (t * np.pi)
        return cls(
            "power", {"t": float(t), "nodes": int(nodes), "reflected": False},
            x, scale * w,
        )

    @classmethod
    def custom(cls, density, nodes: int = DEFAULT_NODES) -> "SMeasure":
        """Density given by a callable on (0, 1), integrated by plain Gauss-Legendre.

        The node count is fixed at construction (no adaptivity) so results
        are reproducible; the caller owns the accuracy of the density.
        """
        if nodes < 1:
            raise MeasureError("node count must be positive")
        x, w = _legendre_01(int(nodes))
        d = np.asarray([float(density(s)) for s in x])
        if np.any(d < 0.0) or not np.all(np.isfinite(d)):
            raise MeasureError("density must be finite and nonnegative on the nodes")
        return cls("custom", {"nodes": int(nodes)}, x, w * d)

    # -- structure ----------------------------------------------------------

    def transpose(self) -> "SMeasure":
        """Reflected measure ``nu'(s) = nu(1 - s)`` (the transpose of the represented mean)."""
        if self.kind == "dirac":
            return SMeasure.dirac(1.0 - self.params["s"])
        if self.kind == "atoms":
            return SMeasure.from_atoms(
                [(1.0 - s, v) for s, v in self.params["points"]]
            )
        if self.kind == "lebesgue":
            return SMeasure.lebesgue(self.params["nodes"])
        params = dict(self.params)
        if self.kind == "power":
            params["reflected"] = not params["reflected"]
        return SMeasure(self.kind, params, 1.0 - self.nodes, self.weights)

    def same_structure(self, other: "SMeasure", tol: float = 1e-12) -> bool:
        """True when both measures have the same kind and parameters."""
        if self.kind != other.kind:
            return False
        if self.nodes.shape != other.nodes.shape:
            return False
        return bool(
            np.all(np.abs(self.nodes - other.nodes) <= tol)
            and np.all(np.abs(self.weights - other.weights) <= tol)
        )

    def __repr__(self):
        inner = ", ".join(
            f"{k}={v!r}" for k, v in self.params.items() if k != "points"
        )
        return f"SMeasure({self.kind}, {inner or len(self.nodes)})"


# ---------------------------------------------------------------------------
# evaluation against a representing measure
# ---------------------------------------------------------------------------


def eval_monotone(rep: SMeasure, x):
    """Evaluate the operator monotone function represented by ``rep``.

    ``f(x) = integral log_kernel(s, x) d rep(s)``.  For the Lebesgue
    measure this is ``log x``, for the power measure ``(x^t - 1)/t``.
    Accepts a positive scalar or an SPD matrix.
    """
    if _is_matrix(x):
        return _spectral_apply(
            x, lambda w: rep.weights @ log_kernel_grid(rep.nodes, w)
        )
    if x <= 0.0:
        raise DomainError("scalar argument must be positive")
    return float(rep.weights @ log_kernel_grid(rep.nodes, [x])[:, 0])


def eval_mean(nu: SMeasure, a, b):
    """Two-variable operator mean with representing measure ``nu``.

    ``M(A, B) = integral ((1-s) A^-1 + s B^-1)^-1 d nu(s)``; equals
    ``(A+B)/2`` for ``(dirac(0)+dirac(1))/2`` and the harmonic mean for
    ``dirac(1/2)``.  Fixes ``M(A, A) = A`` and is monotone in both slots.
    """
    if a.shape != b.shape:
        raise MeasureError("mean operands must share dimensions")
    rs, irs = sqrt_pair(a)
    w, q = spectral(_sym(irs @ b @ irs))
    if np.any(w <= 0.0):
        raise DomainError("mean operands must be positive definite")
    vals = nu.weights @ (w[None, :] / ((1.0 - nu.nodes)[:, None] * w[None, :] + nu.nodes[:, None]))
    inner = _sym((q * vals) @ q.T)
    return _sym(rs @ inner @ rs)


def transpose_measure(nu: SMeasure) -> SMeasure:
    """Representing measure of the transposed mean: ``eval_mean(nu', A, B) = eval_mean(nu, B, A)``."""
    return nu.transpose()


def check_normalization(rep: SMeasure):
    """Numerically evaluate ``(f(1), f'(1))`` for the represented function.

    ``f(1)`` is exactly zero for any probability measure; ``f'(1)`` equals
    the total quadrature mass and is estimated by 5-point centered
    differences at width 1e-4, accurate to ~1e-10 for analytic f.
    """
    h = 1e-4
    f = lambda x: eval_monotone(rep, x)
    f1 = f(1.0)
    fp = (f(1.0 - 2 * h) - 8.0 * f(1.0 - h) + 8.0 * f(1.0 + h) - f(1.0 + 2 * h)) / (12.0 * h)
    return f1, fp


# ---------------------------------------------------------------------------
# JSON schema
# ---------------------------------------------------------------------------


def smeasure_to_json(nu: SMeasure) -> dict:
    """Serialize to the SMeasure JSON schema (dirac/atoms/lebesgue/power only)."""
    if nu.kind == "dirac":
        return {"type": "dirac", "s": nu.params["s"]}
    if nu.kind == "atoms":
        return {
            "type": "atoms",
            "points": [{"s": s, "w": v} for s, v in nu.params["points"]],
        }
    if nu.kind == "lebesgue":
        return {"type": "lebesgue", "nodes": nu.params["nodes"]}
    if nu.kind == "power" and not nu.params["reflected"]:
        return {"type": "power", "t": nu.params["t"], "nodes": nu.params["nodes"]}
    raise MeasureError(f"measure kind {nu.kind!r} has no JSON form")


def smeasure_from_json(obj, default_nodes: int = DEFAULT_NODES) -> SMeasure:
    """Parse the SMeasure JSON schema."""
    if not isinstance(obj, dict) or "type" not in obj:
        raise MeasureError('measure JSON must carry a "type" field')
    kind = obj["type"]
    if kind == "dirac":
        return SMeasure.dirac(obj["s"])
    if kind == "atoms":
        return SMeasure.from_atoms([(p["s"], p["w"]) for p in obj["points"]])
    if kind == "lebesgue":
        return SMeasure.lebesgue(int(obj.get("nodes", default_nodes)))
    if kind == "power":
        return SMeasure.power(obj["t"], int(obj.get("nodes", default_nodes)))
    raise MeasureError(f"unknown measure type {kind!r}")
