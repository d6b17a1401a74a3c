"""Probability measures on [0, 1] x SPD with finite matrix support.

A :class:`PMeasure` is a finite list of atoms ``(weight, matrix, nu)`` where
``nu`` is the measure on [0, 1] attached to that matrix; it represents the
product-like measure ``sum_k w_k (nu_k x delta_{A_k})``.  Continuous matrix
marginals are out of scope: every construction in the underlying theory
that we evaluate numerically has finitely many matrix atoms, while the
[0, 1] marginal may be continuous (handled by quadrature inside SMeasure).

Integration is a deterministic double sum, atom-major then node-major, so
repeated runs produce bit-identical results.
"""

import numpy as np

from .core import congruence, loewner_leq, matrix_from_json, matrix_to_json, spd_matrix
from .errors import Incomparable, MeasureError, ShapeError
from .monotone import SMeasure, smeasure_from_json, smeasure_to_json


class PMeasure:
    """Finitely supported probability measure on [0, 1] x SPD.

    Parameters
    ----------
    atoms : sequence of (weight, matrix, SMeasure)
        Positive weights summing to 1 (within 1e-12); matrices all SPD and
        of one shared dimension.
    """

    __slots__ = ("atoms", "dim")

    def __init__(self, atoms):
        atoms = [(float(w), spd_matrix(m), nu) for w, m, nu in atoms]
        if not atoms:
            raise MeasureError("measure needs at least one atom")
        w = np.array([a[0] for a in atoms])
        if np.any(w <= 0.0):
            raise MeasureError("atom weights must be positive")
        if abs(w.sum() - 1.0) > 1e-12:
            raise MeasureError(f"atom weights must sum to 1, got {w.sum()!r}")
        dim = atoms[0][1].shape[0]
        for _, m, nu in atoms:
            if m.shape != (dim, dim):
                raise MeasureError("all atom matrices must share one dimension")
            if not isinstance(nu, SMeasure):
                raise MeasureError("each atom needs an SMeasure on [0, 1]")
        self.atoms = tuple(atoms)
        self.dim = dim

    def __len__(self):
        return len(self.atoms)

    def matrix_pairs(self):
        """The matrix marginal as ``[(weight, matrix), ...]``."""
        return [(w, m) for w, m, _ in self.atoms]

    def __repr__(self):
        return f"PMeasure({len(self.atoms)} atoms, dim={self.dim})"


def product_measure(nu: SMeasure, sigma) -> PMeasure:
    """Product of one [0, 1]-measure with a finitely supported matrix measure.

    ``sigma`` is ``[(weight, matrix), ...]``; every atom of the result
    carries the same ``nu``.
    """
    if not sigma:
        raise MeasureError("matrix marginal needs at least one atom")
    return PMeasure([(w, m, nu) for w, m in sigma])


def integrate(mu: PMeasure, fn) -> np.ndarray:
    """Integrate a matrix-valued function against the measure.

    Computes ``sum_k w_k sum_i omega_i fn(s_i, A_k)`` with the atom's
    quadrature rule, in atom-list then node order.  ``fn(s, A)`` must
    return a symmetric matrix of the measure's dimension.
    """
    acc = np.zeros((mu.dim, mu.dim))
    for w, m, nu in mu.atoms:
        inner = np.zeros((mu.dim, mu.dim))
        for s, omega in zip(nu.nodes, nu.weights):
            g = np.asarray(fn(float(s), m), dtype=float)
            if g.shape != (mu.dim, mu.dim):
                raise ShapeError(f"integrand returned shape {g.shape}")
            inner += omega * g
        acc += w * inner
    return acc


def congruence_measure(x, mu: PMeasure) -> PMeasure:
    """Push the matrix marginal through ``A -> X A X.T`` (weights and nu unchanged)."""
    return PMeasure([(w, congruence(x, m), nu) for w, m, nu in mu.atoms])


def measure_leq(mu1: PMeasure, mu2: PMeasure, tol: float = 1e-10) -> bool:
    """Partial order on structurally matched measures.

    Atoms are matched by list position and must have equal weights (within
    1e-12) and structurally identical [0, 1]-measures; then the order holds
    iff every matched matrix pair is Loewner ordered.  Structural mismatch
    raises :class:`Incomparable`.
    """
    if len(mu1) != len(mu2):
        raise Incomparable("measures have different atom counts")
    if mu1.dim != mu2.dim:
        raise Incomparable("measures have different matrix dimensions")
    for (w1, a1, n1), (w2, a2, n2) in zip(mu1.atoms, mu2.atoms):
        if abs(w1 - w2) > 1e-12:
            raise Incomparable("matched atoms carry different weights")
        if not n1.same_structure(n2):
            raise Incomparable("matched atoms carry different [0, 1]-measures")
    return all(
        loewner_leq(a1, a2, tol)
        for (_, a1, _), (_, a2, _) in zip(mu1.atoms, mu2.atoms)
    )


def pmeasure_to_json(mu: PMeasure) -> dict:
    """Serialize to the PMeasure JSON schema."""
    return {
        "atoms": [
            {"weight": w, "nu": smeasure_to_json(nu), "matrix": matrix_to_json(m)}
            for w, m, nu in mu.atoms
        ]
    }


def pmeasure_from_json(obj, default_nodes: int = 64) -> PMeasure:
    """Parse the PMeasure JSON schema ``{"atoms": [{"weight", "nu", "matrix"}, ...]}``."""
    if not isinstance(obj, dict) or "atoms" not in obj:
        raise MeasureError('measure JSON must carry an "atoms" list')
    atoms = []
    for entry in obj["atoms"]:
        atoms.append(
            (
                entry["weight"],
                matrix_from_json(entry["matrix"]),
                smeasure_from_json(entry["nu"], default_nodes=default_nodes),
            )
        )
    return PMeasure(atoms)
