"""Interpolants on zero sets of polynomial systems, plus their verifier.

The multi-node Hermite interpolant is assembled node by node: the node's
decomposition determinant multiplies a bracket polynomial built from the
prescribed derivative data and the local residues of the shifted monomials
(z-w)^{d-I-k}.  Cross-node independence comes from the determinant lying in
the local ideal of every other common zero, so contributions never disturb
each other's conditions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (ArityError, BackendMismatch, DataShapeError,
                     DegenerateRoot, DuplicateNode)
from .polynomials import (MPoly, TruncSeries, box_indices, index_add,
                          index_sub, jacobian_det, multi_factorial,
                          poly_matrix_det, shifted_monomial)
from .residues import bezoutian_at, local_residue, power_decomposition
from .scalars import (DEFAULT_TOLERANCE, Tolerance, approx_eq, invert,
                      one as scalar_one)


@dataclass
class NodeSpec:
    """One interpolation node: point, vanishing orders, derivative data.

    `values` maps every multi-index ell with 0 <= ell <= order - I to the
    prescribed value of the ell-th partial derivative at the point.
    """

    point: tuple
    order: tuple
    values: dict

    @property
    def box(self):
        return tuple(d - 1 for d in self.order)


@dataclass
class InterpProblem:
    system: list
    nodes: list
    backend: str
    tolerance: Tolerance = DEFAULT_TOLERANCE

    @property
    def nvars(self):
        return len(self.system)

    def validate(self):
        n = len(self.system)
        if n == 0:
            raise ArityError("empty system")
        for p in self.system:
            if p.nvars != n:
                raise ArityError("system is not square")
            if p.backend != self.backend:
                raise BackendMismatch("system backend does not match problem")
        for spec in self.nodes:
            point = tuple(spec.point)
            order = tuple(spec.order)
            if len(point) != n or len(order) != n:
                raise ArityError("node point/order length does not match system")
            if any(not isinstance(d, int) or d < 1 for d in order):
                raise ArityError("order entries must be integers >= 1")
            for v in point:
                if v.backend != self.backend:
                    raise BackendMismatch("node point backend does not match")
            box = spec.box
            expected = set(box_indices(box))
            got = {tuple(k) for k in spec.values}
            if got != expected:
                raise DataShapeError(
                    f"node {point}: derivative data must cover exactly the box "
                    f"{box}; missing {sorted(expected - got)}, "
                    f"extra {sorted(got - expected)}")
            for v in spec.values.values():
                if v.backend != self.backend:
                    raise BackendMismatch("node value backend does not match")
        for i in range(len(self.nodes)):
            for j in range(i + 1, len(self.nodes)):
                a, b = self.nodes[i].point, self.nodes[j].point
                if all(approx_eq(x, y, self.tolerance) for x, y in zip(a, b)):
                    raise DuplicateNode(f"nodes {i} and {j} coincide at {tuple(a)}")


@dataclass
class VerifyEntry:
    node_index: int
    derivative: tuple
    target: object
    achieved: object
    ok: bool
    deviation: float


@dataclass
class VerifyReport:
    entries: list
    ok: bool
    max_deviation: float


def _hermite_parts(problem, tie_break):
    problem.validate()
    n = problem.nvars
    backend = problem.backend
    parts = []
    for spec in problem.nodes:
        node = power_decomposition(problem.system, spec.point, spec.order,
                                   tol=problem.tolerance, tie_break=tie_break)
        box = node.box
        bracket = MPoly.zero(n, backend)
        for ell in box_indices(box):
            weight = spec.values[ell] / multi_factorial(ell)
            if weight.is_zero():
                continue
            for k in box_indices(index_sub(box, ell)):
                numerator = shifted_monomial(n, node.point, index_sub(box, k),
                                             backend)
                residue = local_residue(numerator, node)
                if residue.is_zero():
                    continue
                mono = shifted_monomial(n, node.point, index_add(ell, k), backend)
                bracket = bracket + mono.scale(weight * residue)
        parts.append((node, node.det_poly * bracket))
    return parts


def hermite_contributions(problem, tie_break="min"):
    """Per-node contribution polynomials of the Hermite interpolant."""
    return [contribution for _node, contribution in
            _hermite_parts(problem, tie_break)]


def hermite_interpolate(problem, tie_break="min"):
    """Polynomial matching all prescribed derivative data at all nodes."""
    parts = _hermite_parts(problem, tie_break)
    f = MPoly.zero(problem.nvars, problem.backend)
    for _node, contribution in parts:
        f = f + contribution
    if parts:
        # sanity cap: determinant degree plus twice the data box size
        cap = max(node.det_poly.total_degree() + 2 * sum(node.box)
                  for node, _c in parts)
        assert f.total_degree() <= cap
    return f


def lagrange_contributions(problem):
    """Per-node contributions of the simple-node (Lagrange) interpolant."""
    problem.validate()
    n = problem.nvars
    origin = (0,) * n
    for spec in problem.nodes:
        if tuple(spec.order) != (1,) * n:
            raise DataShapeError(
                "lagrange interpolation requires order (1,...,1) at all nodes")
    out = []
    for spec in problem.nodes:
        jac = jacobian_det(problem.system, spec.point)
        if problem.tolerance.is_zero(jac, scale=1.0):
            raise DegenerateRoot(f"jacobian vanishes at node {tuple(spec.point)}")
        det = poly_matrix_det(bezoutian_at(problem.system, spec.point))
        out.append(det.scale(spec.values[origin] * invert(jac)))
    return out


def lagrange_interpolate(problem):
    """Value interpolation at simple nodes via divided-difference matrices."""
    contributions = lagrange_contributions(problem)
    f = MPoly.zero(problem.nvars, problem.backend)
    for c in contributions:
        f = f + c
    return f


def univariate_hermite(nodes):
    """Classical one-variable Hermite interpolation from the residue formula.

    `nodes` is a list of (point, values) pairs; the multiplicity of each
    point is the length of its values list [f(w), f'(w), ..].  Built directly
    from cofactor products prod_{i != j} (z - w_i)^{mu_i} and one-variable
    Laurent coefficient extraction, independent of the multivariate pipeline.
    """
    if not nodes:
        raise ArityError("need at least one node")
    points = [p for p, _values in nodes]
    backend = points[0].backend
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            if points[i] == points[j]:
                raise DuplicateNode(f"repeated node {points[i]!r}")
    for point, values in nodes:
        if len(values) < 1:
            raise DataShapeError("each node needs at least the value itself")
        if point.backend != backend or any(v.backend != backend for v in values):
            raise BackendMismatch("mixed backends in univariate data")
    f = MPoly.zero(1, backend)
    for j, (point, values) in enumerate(nodes):
        mu = len(values)
        cofactor = MPoly.constant(1, scalar_one(backend))
        for i, (other, other_values) in enumerate(nodes):
            if i == j:
                continue
            cofactor = cofactor * shifted_monomial(1, (other,),
                                                   (len(other_values),), backend)
        inv_jet = TruncSeries.from_poly(cofactor, (point,), (mu - 1,)).inverse()
        bracket = MPoly.zero(1, backend)
        for ell, c in enumerate(values):
            weight = c / multi_factorial((ell,))
            if weight.is_zero():
                continue
            for s in range(mu - ell):
                coeff = inv_jet.coeff((s,))
                if coeff.is_zero():
                    continue
                mono = shifted_monomial(1, (point,), (ell + s,), backend)
                bracket = bracket + mono.scale(weight * coeff)
        f = f + cofactor * bracket
    return f


def verify_interpolation(poly, problem):
    """Check every prescribed derivative of the polynomial symbolically.

    Failures are collected into the report, never raised.
    """
    problem.validate()
    entries = []
    max_dev = 0.0
    tol = problem.tolerance
    for i, spec in enumerate(problem.nodes):
        for ell in box_indices(spec.box):
            target = spec.values[ell]
            achieved = poly.partial_derivative(ell).evaluate(spec.point)
            deviation = (achieved - target).magnitude()
            ok = tol.close(achieved, target, scale=max(1.0, target.magnitude()))
            entries.append(VerifyEntry(node_index=i, derivative=ell,
                                       target=target, achieved=achieved,
                                       ok=ok, deviation=deviation))
            max_dev = max(max_dev, deviation)
    return VerifyReport(entries=entries, ok=all(e.ok for e in entries),
                        max_deviation=max_dev)
