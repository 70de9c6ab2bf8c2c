"""Divided differences and the triangular Newton-basis congruence.

The lower-triangular transform Phi maps nodal values to divided
differences, intertwines the node diagonal with its Jordan-like bidiagonal
companion, and converges to Taylor coefficients as the nodes coalesce.
Used both as a limit tool and as a congruence preconditioner for Pick
matrices with clustered nodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .functions import PointConfig
from .hermitian import HermitianMatrix, NegSquaresError, ValidationError

__all__ = [
    "DividedDifferenceTable",
    "PhiMatrix",
    "divided_diffs",
    "phi_matrix",
    "jordan_companion",
    "intertwining_residual",
    "phi_congruence",
    "ClusterLimitReport",
    "cluster_limit_check",
    "taylor_from_circle",
]


@dataclass(frozen=True)
class DividedDifferenceTable:
    """Full triangular table; entry (i, j) holds the difference over nodes i..i+j.

    The first column equals the raw values and the top row is the vector of
    leading differences over the node prefix.
    """

    nodes: PointConfig
    values: np.ndarray
    table: np.ndarray

    def top_row(self) -> np.ndarray:
        """Leading divided differences (value, first difference, ...)."""
        return np.array([self.table[0, j] for j in range(len(self.nodes))])


def divided_diffs(nodes: PointConfig, v) -> DividedDifferenceTable:
    """Recursive divided-difference table of a function over ordered nodes.

    table[i, j] = (table[i, j-1] - table[i+1, j-1]) / (z_i - z_{i+j});
    evaluation failures carry the index of the offending node.
    """
    z = nodes.values()
    k = len(z)
    vals = np.zeros(k, dtype=complex)
    for i, zi in enumerate(z):
        try:
            vals[i] = complex(v(zi))
        except Exception as exc:
            raise NegSquaresError(f"evaluation failed at node {i} ({zi}): {exc}") from exc
    table = np.full((k, k), np.nan, dtype=complex)
    table[:, 0] = vals
    for j in range(1, k):
        for i in range(k - j):
            table[i, j] = (table[i, j - 1] - table[i + 1, j - 1]) / (z[i] - z[i + j])
    table.flags.writeable = False
    return DividedDifferenceTable(nodes, vals, table)


@dataclass(frozen=True)
class PhiMatrix:
    """Lower-triangular Newton-basis transform for an ordered node set.

    Row i, column j (i >= j) holds 1 / phi_i'(z_j) where phi_i is the monic
    polynomial with roots at the first i nodes.  Invertible for distinct
    nodes; flagged well conditioned when the minimum pairwise node distance
    is at least 1e-6.
    """

    nodes: PointConfig
    matrix: np.ndarray = field(compare=False)
    well_conditioned: bool = field(default=True, compare=False)


def phi_matrix(nodes: PointConfig) -> PhiMatrix:
    z = nodes.values()
    k = len(z)
    m = np.zeros((k, k), dtype=complex)
    for i in range(k):
        for j in range(i + 1):
            prod = 1.0 + 0.0j
            for t in range(i + 1):
                if t != j:
                    prod *= z[j] - z[t]
            m[i, j] = 1.0 / prod
    m.flags.writeable = False
    return PhiMatrix(nodes, m, nodes.min_separation >= 1e-6)


def jordan_companion(nodes: PointConfig) -> np.ndarray:
    """Lower bidiagonal matrix: nodes on the diagonal, ones on the subdiagonal."""
    z = nodes.values()
    return np.diag(z) + np.diag(np.ones(len(z) - 1), -1) if len(z) > 1 else np.diag(z)


def intertwining_residual(nodes: PointConfig) -> float:
    """max |Phi D - J Phi| for D = diag(nodes) and J the bidiagonal companion.

    Zero in exact arithmetic; the contract is 1e-12 * max|Phi| * max|z|.
    """
    phi = phi_matrix(nodes).matrix
    d = np.diag(nodes.values())
    j = jordan_companion(nodes)
    return float(np.max(np.abs(phi @ d - j @ phi)))


def phi_congruence(nodes: PointConfig, matrix: HermitianMatrix) -> HermitianMatrix:
    """Phi M Phi*: inertia-preserving change of basis to divided differences."""
    if matrix.dim != len(nodes):
        raise ValidationError(
            f"dimension mismatch: {matrix.dim}x{matrix.dim} matrix, {len(nodes)} nodes"
        )
    phi = phi_matrix(nodes).matrix
    return HermitianMatrix(phi @ matrix.entries @ phi.conj().T)


# ---------------------------------------------------------------------------
# clustered limits


@dataclass(frozen=True)
class ClusterLimitReport:
    center: complex
    order: int
    radii: tuple[float, ...]
    per_radius_error: tuple[float, ...]
    limit_estimate: np.ndarray = field(compare=False)
    final_error: float = 0.0
    decreasing: bool = True
    loss_of_significance: bool = False


def taylor_from_circle(v, center: complex, order: int, radius: float, samples: int = 128) -> np.ndarray:
    """First ``order`` Taylor coefficients via trapezoid contour averages."""
    theta = 2.0 * np.pi * np.arange(samples) / samples
    ring = center + radius * np.exp(1j * theta)
    vals = np.asarray([complex(v(z)) for z in ring])
    coeffs = np.zeros(order, dtype=complex)
    for j in range(order):
        coeffs[j] = np.mean(vals * np.exp(-1j * j * theta)) / radius**j
    return coeffs


def _ring_nodes(center: complex, radius: float, k: int, flip: bool) -> PointConfig:
    offsets = radius * np.exp(1j * (2.0 * np.pi * np.arange(k) / k + 0.25))
    if flip:
        offsets = -offsets
    return PointConfig.from_complex(center + offsets)


def _neville_at_zero(xs: list[float], ys: list[np.ndarray]) -> np.ndarray:
    ys = [np.asarray(y, dtype=complex) for y in ys]
    for lev in range(1, len(ys)):
        ys = [
            (xs[i] * ys[i + 1] - xs[i + lev] * ys[i]) / (xs[i] - xs[i + lev])
            for i in range(len(ys) - 1)
        ]
    return ys[0]


def cluster_limit_check(
    center,
    v,
    order: int,
    radii: tuple[float, ...] = (1e-1, 1e-2, 1e-3),
    taylor=None,
) -> ClusterLimitReport:
    """Convergence of the transformed value vector to Taylor coefficients.

    For each radius the nodes sit on a ring around the center; the estimate
    averages the ring with its reflection through the center, which cancels
    the odd-order error terms, and the returned limit estimate extrapolates
    the remaining even series to radius zero.  Taylor coefficients are taken
    as given or recovered from a contour average on the largest ring.

    Radii below 1e-5 combined with order >= 4 run into catastrophic
    cancellation in double precision; the report flags this rather than
    pretending otherwise.
    """
    center = complex(center)
    if order < 1:
        raise ValidationError(f"order must be >= 1, got {order}")
    radii = tuple(float(r) for r in radii)
    if any(r <= 0 for r in radii) or list(radii) != sorted(radii, reverse=True):
        raise ValidationError(f"radii must be positive and strictly decreasing, got {radii}")
    if taylor is None:
        taylor = taylor_from_circle(v, center, order, radii[0])
    want = np.asarray(taylor, dtype=complex)[:order]

    estimates = []
    errors = []
    for r in radii:
        halves = []
        for flip in (False, True):
            nodes = _ring_nodes(center, r, order, flip)
            vals = np.array([complex(v(z)) for z in nodes.values()])
            halves.append(phi_matrix(nodes).matrix @ vals)
        est = (halves[0] + halves[1]) / 2.0
        estimates.append(est)
        errors.append(float(np.max(np.abs(est - want))))
    limit = (
        _neville_at_zero([r * r for r in radii], estimates)
        if len(radii) > 1
        else estimates[0]
    )
    return ClusterLimitReport(
        center=center,
        order=order,
        radii=radii,
        per_radius_error=tuple(errors),
        limit_estimate=limit,
        final_error=float(np.max(np.abs(limit - want))),
        decreasing=all(
            errors[i + 1] <= errors[i] * 1.001 + 1e-13 for i in range(len(errors) - 1)
        ),
        loss_of_significance=(min(radii) < 1e-5 and order >= 4),
    )
