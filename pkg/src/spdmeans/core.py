"""Dense SPD/symmetric matrix primitives.

Everything here operates on plain ``numpy.ndarray`` values.  Matrices enter
the library through :func:`spd_matrix` / :func:`sym_matrix` (or the JSON
loaders), which symmetrize and validate; the remaining operations assume
validated input and stay allocation-light so they can sit inside solver
loops.

All matrix functions go through a full symmetric eigendecomposition rather
than Pade or scaling-and-squaring: dimensions stay small and the spectral
route handles every scalar function we need with one kernel.
"""

from typing import Callable, NamedTuple

import numpy as np

from .errors import (
    DomainError,
    EmptyInput,
    MeasureError,
    NotPositiveDefinite,
    NumericalFailure,
    ShapeError,
    SingularTransform,
)

# Relative eigenvalue floor used by the positive-definiteness check.
PD_FLOOR = 1e-14

# Default scaled tolerance for the Loewner order test.  Monotonicity tests
# of iterated means accumulate rounding, so exact checks are too brittle.
LOEWNER_TOL = 1e-10


def _sym(a):
    return 0.5 * (a + a.T)


def sym_matrix(entries) -> np.ndarray:
    """Validate and symmetrize a square real matrix.

    Parameters
    ----------
    entries : array_like, shape (n, n)
        Square matrix; symmetrized as ``(A + A.T) / 2``.

    Returns
    -------
    ndarray
        Symmetric float64 copy.
    """
    a = np.array(entries, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ShapeError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DomainError("matrix entries must be finite")
    return _sym(a)


def spd_matrix(entries) -> np.ndarray:
    """Validate, symmetrize and positivity-check a matrix.

    The smallest eigenvalue must exceed ``dim * 1e-14 * lambda_max`` so that
    floating-point drift neither rejects valid input nor admits indefinite
    matrices.

    Returns
    -------
    ndarray
        Symmetric positive definite float64 copy.
    """
    a = sym_matrix(entries)
    w = np.linalg.eigvalsh(a)
    lo, hi = w[0], w[-1]
    if hi <= 0.0 or lo <= a.shape[0] * PD_FLOOR * hi:
        raise NotPositiveDefinite(
            f"matrix is not positive definite (min eig {lo:.3e}, max eig {hi:.3e})"
        )
    return a


class SpectralDecomposition(NamedTuple):
    """Eigendecomposition ``A = Q diag(eigenvalues) Q.T`` with ascending eigenvalues."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def spectral(a) -> SpectralDecomposition:
    """Symmetric eigendecomposition with ascending eigenvalues."""
    try:
        w, q = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"eigendecomposition failed: {exc}") from exc
    return SpectralDecomposition(w, q)


def apply_scalar_fn(a, fn: Callable) -> np.ndarray:
    """Apply a scalar function to a symmetric matrix spectrally.

    Parameters
    ----------
    a : ndarray
        Symmetric (typically SPD) matrix.
    fn : callable
        Scalar function, vectorized over an eigenvalue array.

    Returns
    -------
    ndarray
        ``Q diag(fn(w)) Q.T`` where ``(w, Q) = spectral(a)``.
    """
    w, q = spectral(a)
    with np.errstate(all="ignore"):
        fw = np.asarray(fn(w), dtype=float)
    if fw.shape != w.shape or not np.all(np.isfinite(fw)):
        raise DomainError("scalar function undefined on part of the spectrum")
    return _sym((q * fw) @ q.T)


def spd_power(a, p: float) -> np.ndarray:
    """Matrix power ``A**p`` of an SPD matrix via the spectral route."""
    w, q = spectral(a)
    if np.any(w <= 0.0):
        raise NotPositiveDefinite("matrix power of a non-positive matrix")
    return _sym((q * w**p) @ q.T)


def sqrt_pair(a):
    """Return ``(A**0.5, A**-0.5)`` from a single eigendecomposition."""
    w, q = spectral(a)
    if np.any(w <= 0.0):
        raise NotPositiveDefinite("square root of a non-positive matrix")
    r = np.sqrt(w)
    return _sym((q * r) @ q.T), _sym((q / r) @ q.T)


def congruence(c, a) -> np.ndarray:
    """Congruence transform ``C A C.T``.

    Raises :class:`SingularTransform` when ``C`` is numerically singular
    (condition estimate above 1e14 or non-finite).
    """
    c = np.asarray(c, dtype=float)
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise ShapeError(f"transform must be square, got {c.shape}")
    if c.shape[0] != a.shape[0]:
        raise ShapeError("transform and matrix dimensions differ")
    cond = np.linalg.cond(c)
    if not np.isfinite(cond) or cond > 1e14:
        raise SingularTransform(f"transform is numerically singular (cond {cond:.3e})")
    return _sym(c @ a @ c.T)


def geometric_mean(a, b, t: float) -> np.ndarray:
    """Weighted geometric mean ``A^(1/2) (A^(-1/2) B A^(-1/2))^t A^(1/2)``.

    ``t = 0`` returns ``A`` and ``t = 1`` returns ``B``; for ``t`` in between
    this is the geodesic of the affine-invariant metric.
    """
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"geometric mean weight must lie in [0, 1], got {t}")
    if a.shape != b.shape:
        raise ShapeError("operands must share dimensions")
    rs, irs = sqrt_pair(a)
    return _sym(rs @ spd_power(_sym(irs @ b @ irs), t) @ rs)


def loewner_leq(a, b, tol: float = LOEWNER_TOL) -> bool:
    """Test ``A <= B`` in the Loewner (positive semidefinite) order.

    True iff ``lambda_min(B - A) >= -tol * (1 + ||B - A||_F)``.
    """
    if a.shape != b.shape:
        raise ShapeError("operands must share dimensions")
    d = b - a
    wmin = np.linalg.eigvalsh(_sym(d))[0]
    return bool(wmin >= -tol * (1.0 + np.linalg.norm(d)))


def _check_weights(pairs):
    if len(pairs) == 0:
        raise EmptyInput("need at least one (weight, matrix) pair")
    w = np.array([p[0] for p in pairs], dtype=float)
    if np.any(w <= 0.0):
        raise MeasureError("weights must be positive")
    if abs(w.sum() - 1.0) > 1e-12:
        raise MeasureError(f"weights must sum to 1, got {w.sum()!r}")
    dim = pairs[0][1].shape[0]
    for _, m in pairs:
        if m.shape != (dim, dim):
            raise ShapeError("all matrices must share dimensions")
    return w


def weighted_arith(pairs) -> np.ndarray:
    """Weighted arithmetic mean ``sum_k w_k A_k`` of SPD matrices."""
    _check_weights(pairs)
    acc = np.zeros_like(pairs[0][1])
    for w, m in pairs:
        acc = acc + w * m
    return _sym(acc)


def weighted_harm(pairs) -> np.ndarray:
    """Weighted harmonic mean ``(sum_k w_k A_k^-1)^-1``; below the arithmetic mean."""
    _check_weights(pairs)
    acc = np.zeros_like(pairs[0][1])
    for w, m in pairs:
        acc = acc + w * spd_power(m, -1.0)
    return spd_power(_sym(acc), -1.0)


def matrix_to_json(a) -> dict:
    """Serialize a matrix to the ``{"dim": n, "data": [[...], ...]}`` schema."""
    a = np.asarray(a, dtype=float)
    return {"dim": int(a.shape[0]), "data": [[float(v) for v in row] for row in a]}


def matrix_from_json(obj, spd: bool = True) -> np.ndarray:
    """Parse the matrix JSON schema; symmetrizes and validates.

    Parameters
    ----------
    obj : dict
        ``{"dim": n, "data": [[row0...], ...]}`` with row-major 64-bit floats.
    spd : bool
        When true (default) the matrix must be positive definite.
    """
    if not isinstance(obj, dict) or "dim" not in obj or "data" not in obj:
        raise MeasureError('matrix JSON must have "dim" and "data" fields')
    dim = obj["dim"]
    data = np.array(obj["data"], dtype=float)
    if data.shape != (dim, dim):
        raise ShapeError(f'"data" must be {dim}x{dim}, got {data.shape}')
    return spd_matrix(data) if spd else sym_matrix(data)
