"""Vanishing-order checks, power decompositions and local residues.

A node is a common zero w of a square polynomial system together with a
vector of per-variable vanishing orders d.  Two facts drive everything here:

* each equation can be rewritten as a combination of the pure powers
  (z_k - w_k)^{d_k} with polynomial matrix entries, provided the order
  conditions hold, and

* the local residue of numerator/(p_1 ... p_n) at w is then a single Taylor
  coefficient: the one at index d - (1,...,1) of the product of the
  numerator's jet with the jet of 1/det(matrix), both centered at w.

The second fact replaces any contour integration; residues here are computed
purely by truncated series arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (ArityError, BackendMismatch, DegenerateLeadingMatrix,
                     DegenerateRoot, OrderViolation)
from .polynomials import (MPoly, TruncSeries, box_indices, index_leq, index_sub,
                          jacobian_det, poly_matrix_det, scalar_matrix_det,
                          unit_index)
from .scalars import DEFAULT_TOLERANCE, Scalar, invert


@dataclass
class OrderReport:
    """Outcome of checking claimed vanishing orders at one node."""

    point: tuple
    order: tuple
    vanishing_ok: bool
    violations: list          # (equation index, offending multi-index) pairs
    leading_matrix: list      # pure d_k-th partials of p_i in variable k, at the point
    leading_det: Scalar
    leading_ok: bool

    @property
    def ok(self):
        return self.vanishing_ok and self.leading_ok


@dataclass
class Node:
    """A fully prepared node: decomposition matrix, determinant data and the
    inverse-determinant jet that local residues read from."""

    point: tuple
    order: tuple
    matrix: list              # rows of MPoly, in the original coordinates
    det_poly: MPoly
    det_at_point: Scalar
    inv_det_jet: TruncSeries
    backend: str = field(repr=False)
    tie_break: str = "min"

    @property
    def box(self):
        """The data box d - (1,...,1) attached to this node."""
        return tuple(d - 1 for d in self.order)

    @property
    def multiplicity(self):
        out = 1
        for d in self.order:
            out *= d
        return out


def _validate_system(system, point, order=None):
    n = len(system)
    point = tuple(point)
    if n == 0 or len(point) != n or any(p.nvars != n for p in system):
        raise ArityError("need a square system with a matching point")
    backend = system[0].backend
    for p in system:
        if p.backend != backend:
            raise BackendMismatch("mixed backends in system")
    for v in point:
        if v.backend != backend:
            raise BackendMismatch("point backend does not match system")
    if order is not None:
        order = tuple(order)
        if len(order) != n:
            raise ArityError("order vector length does not match system")
        if any(not isinstance(d, int) or d < 1 for d in order):
            raise ArityError("order vector entries must be integers >= 1")
    return n, point, order, backend


def check_zero_order(system, point, order, tol=DEFAULT_TOLERANCE):
    """Check the claimed vanishing orders at a point.

    Verifies (a) that every derivative of each p_i of order <= d - I vanishes
    at the point, equivalently that the recentered p_i has no coefficient
    inside the box, and (b) that the matrix of pure d_k-th partials in z_k is
    non-degenerate.  Failures are reported, not raised.
    """
    n, point, order, _backend = _validate_system(system, point, order)
    box = tuple(d - 1 for d in order)
    violations = []
    for i, p in enumerate(system):
        recentered = p.taylor_shift(point)
        scale = recentered.max_coeff_magnitude()
        for idx in box_indices(box):
            if not tol.is_zero(recentered.coeff(idx), scale=scale):
                violations.append((i, idx))
    matrix = []
    for p in system:
        row = []
        for k in range(n):
            pure = tuple(order[k] if j == k else 0 for j in range(n))
            row.append(p.partial_derivative(pure).evaluate(point))
        matrix.append(row)
    det = scalar_matrix_det(matrix)
    scale = 1.0
    for row in matrix:
        scale *= max(max(e.magnitude() for e in row), 1.0)
    leading_ok = not tol.is_zero(det, scale=scale)
    return OrderReport(point=point, order=order,
                       vanishing_ok=not violations, violations=violations,
                       leading_matrix=matrix, leading_det=det,
                       leading_ok=leading_ok)


def power_decomposition(system, point, order, tol=DEFAULT_TOLERANCE,
                        tie_break="min"):
    """Rewrite each p_i as sum_k m_ik(z) * (z_k - w_k)^{d_k} and prepare the
    residue data at the node.

    After recentering, every surviving term has exponent >= d_k in at least
    one variable k (that is exactly the vanishing condition); the term is
    assigned to the smallest such k ("min", the default) or the largest
    ("max").  Any valid assignment yields the same residues; the tie-break
    only fixes a canonical matrix.

    Raises OrderViolation if the orders do not hold, and
    DegenerateLeadingMatrix if the determinant vanishes at the point.
    """
    if tie_break not in ("min", "max"):
        raise ValueError(f"tie_break must be 'min' or 'max', got {tie_break!r}")
    n, point, order, backend = _validate_system(system, point, order)
    box = tuple(d - 1 for d in order)
    rows_u = []
    for i, p in enumerate(system):
        recentered = p.taylor_shift(point)
        scale = recentered.max_coeff_magnitude()
        columns = [{} for _ in range(n)]
        for idx, c in recentered.terms.items():
            if index_leq(idx, box):
                # inside the box: must be (numerically) zero by condition on orders
                if not tol.is_zero(c, scale=scale):
                    raise OrderViolation(
                        f"equation {i} has a nonzero derivative of order {idx} "
                        f"at the node (claimed orders {order})")
                continue
            eligible = [k for k in range(n) if idx[k] >= order[k]]
            k = eligible[0] if tie_break == "min" else eligible[-1]
            reduced = list(idx)
            reduced[k] -= order[k]
            columns[k][tuple(reduced)] = c
        rows_u.append([MPoly(n, backend, col) for col in columns])
    det_u = poly_matrix_det(rows_u)
    det_at_point = det_u.coeff((0,) * n)
    if tol.is_zero(det_at_point, scale=max(det_u.max_coeff_magnitude(), 1.0)):
        raise DegenerateLeadingMatrix(
            f"decomposition determinant vanishes at the node {point}")
    jet = TruncSeries(n, box, point, backend,
                      {idx: c for idx, c in det_u.terms.items()
                       if index_leq(idx, box)})
    inv_jet = jet.inverse()
    back = tuple(-v for v in point)
    matrix = [[entry.taylor_shift(back) for entry in row] for row in rows_u]
    det_poly = det_u.taylor_shift(back)
    return Node(point=point, order=order, matrix=matrix, det_poly=det_poly,
                det_at_point=det_at_point, inv_det_jet=inv_jet,
                backend=backend, tie_break=tie_break)


def bezoutian_at(system, point):
    """Divided-difference matrix rows for the system at a fixed second point.

    Entry (j, k) is the telescoping quotient
    [p_j(w_1..w_{k-1}, z_k, ..) - p_j(w_1..w_k, z_{k+1}, ..)] / (z_k - w_k),
    computed by exact synthetic division (the remainder vanishes by
    construction).  Its determinant equals the Jacobian on the diagonal and
    vanishes when evaluated at a different common zero.
    """
    n, point, _order, _backend = _validate_system(system, point)
    rows = []
    for p in system:
        partial = p
        row = []
        for k in range(n):
            nxt = partial.substitute(k, point[k])
            quotient, _remainder = (partial - nxt).synthetic_divide(k, point[k])
            row.append(quotient)
            partial = nxt
        rows.append(row)
    return rows


def local_residue(numerator, node):
    """Local residue of numerator/(p_1 ... p_n) at the node.

    Equals the coefficient at index d - I of the truncated product of the
    numerator's jet with the node's inverse-determinant jet.
    """
    if numerator.backend != node.backend:
        raise BackendMismatch("numerator backend does not match node")
    if numerator.nvars != len(node.point):
        raise ArityError("numerator variable count does not match node")
    jet = TruncSeries.from_poly(numerator, node.point, node.box)
    product = jet.multiply(node.inv_det_jet)
    return product.coeff(node.box)


def simple_residue(system, point, tol=DEFAULT_TOLERANCE):
    """Residue of 1/(p_1 ... p_n) at a simple zero: 1/jacobian."""
    jac = jacobian_det(system, point)
    if tol.is_zero(jac, scale=1.0):
        raise DegenerateRoot(f"jacobian vanishes at {tuple(point)}")
    return invert(jac)
