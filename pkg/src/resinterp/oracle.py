"""Independent brute-force checkers for the residue pipeline.

Nothing here touches the decomposition or residue machinery; the only shared
code is the polynomial substrate.  The interpolation oracle sets up the dense
linear system of interpolation conditions over a monomial basis box and
solves it directly; the residue oracle factors separable systems into
one-variable Laurent extractions; the derivative oracle uses nested central
differences.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import (ArityError, BackendMismatch, NotSeparable,
                     OracleUnsolvable, OrderViolation)
from .polynomials import (MPoly, TruncSeries, box_indices, graded_lex_key,
                          index_leq)
from .scalars import (DEFAULT_TOLERANCE, EXACT, FLOAT, FloatScalar,
                      from_int, invert, one as scalar_one,
                      zero as scalar_zero)


def default_basis_box(problem):
    """Monomial box guaranteed to contain the residue-formula interpolant.

    Uses only the input degrees and node orders: per variable, n times the
    largest per-variable degree in the system plus twice the largest
    order-minus-one over the nodes.
    """
    n = problem.nvars
    deg = [0] * n
    for p in problem.system:
        for i, e in enumerate(p.degree_box()):
            deg[i] = max(deg[i], e)
    extra = [0] * n
    for spec in problem.nodes:
        for i, d in enumerate(spec.order):
            extra[i] = max(extra[i], d - 1)
    return tuple(n * deg[i] + 2 * extra[i] for i in range(n))


def _condition_rows(problem, columns):
    """One row of derivative-of-monomial values per (node, derivative)."""
    backend = problem.backend
    rows = []
    rhs = []
    for spec in problem.nodes:
        point = tuple(spec.point)
        for ell in box_indices(spec.box):
            row = []
            for beta in columns:
                if not index_leq(ell, beta):
                    row.append(scalar_zero(backend))
                    continue
                factor = 1
                for b, l in zip(beta, ell):
                    factor *= math.perm(b, l)
                entry = from_int(factor, backend)
                for coord, b, l in zip(point, beta, ell):
                    entry = entry * coord ** (b - l)
                row.append(entry)
            rows.append(row)
            rhs.append(spec.values[ell])
    return rows, rhs


def _solve_exact(rows, rhs, ncols):
    """Row-echelon solve over the exact field; free variables stay zero."""
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    nrows = len(m)
    pivot_cols = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, nrows):
            if not m[i][c].is_zero():
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = invert(m[r][c])
        m[r] = [e * inv for e in m[r]]
        for i in range(nrows):
            if i != r and not m[i][c].is_zero():
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivot_cols.append(c)
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        if not m[i][ncols].is_zero():
            raise OracleUnsolvable("interpolation conditions are inconsistent "
                                   "on the chosen basis box")
    solution = [None] * ncols
    for row_i, c in enumerate(pivot_cols):
        solution[c] = m[row_i][ncols]
    return solution


def _solve_float(rows, rhs, tol):
    a = np.array([[e.value for e in row] for row in rows], dtype=complex)
    b = np.array([e.value for e in rhs], dtype=complex)
    x, _residuals, _rank, _sv = np.linalg.lstsq(a, b, rcond=None)
    achieved = a @ x
    resid = float(np.max(np.abs(achieved - b))) if len(b) else 0.0
    scale = max(1.0, float(np.max(np.abs(b), initial=0.0)),
                float(np.max(np.abs(a), initial=0.0))
                * float(np.max(np.abs(x), initial=0.0)))
    if resid > max(tol.abs_eps, tol.rel_eps * scale):
        raise OracleUnsolvable(
            f"least-squares residual {resid:.3e} exceeds tolerance")
    return [FloatScalar(v) for v in x]


def brute_force_interpolant(problem, basis_box=None):
    """Solve the interpolation conditions directly over a monomial basis.

    Returns any polynomial supported on the basis box that matches all the
    prescribed derivative data; raises OracleUnsolvable when none exists.
    """
    problem.validate()
    n = problem.nvars
    if basis_box is None:
        basis_box = default_basis_box(problem)
    basis_box = tuple(basis_box)
    if len(basis_box) != n:
        raise ArityError("basis box length does not match variable count")
    columns = sorted(box_indices(basis_box), key=graded_lex_key)
    rows, rhs = _condition_rows(problem, columns)
    if problem.backend == EXACT:
        solution = _solve_exact(rows, rhs, len(columns))
    else:
        solution = _solve_float(rows, rhs, problem.tolerance)
    terms = {}
    for beta, coeff in zip(columns, solution):
        if coeff is not None and not coeff.is_zero():
            terms[beta] = coeff
    return MPoly(n, problem.backend, terms)


def _univariate_parts(poly, var):
    """Terms of a polynomial that uses only the given variable, as a 1-var poly."""
    terms = {}
    for idx, c in poly.terms.items():
        if any(e != 0 for i, e in enumerate(idx) if i != var):
            raise NotSeparable(
                f"equation for variable {var} involves other variables")
        terms[(idx[var],)] = c
    return MPoly(1, poly.backend, terms)


def separable_residue(system, point, order, numerator_exponents,
                      tol=DEFAULT_TOLERANCE):
    """Residue of (z-w)^a / (p_1 ... p_n) for a separable system.

    Each p_i must involve only z_i and vanish to order d_i at w_i; the
    n-fold residue is then the product of one-variable residues, each read
    off a one-variable inverse jet.
    """
    n = len(system)
    point = tuple(point)
    order = tuple(order)
    numerator_exponents = tuple(numerator_exponents)
    if len(point) != n or len(order) != n or len(numerator_exponents) != n:
        raise ArityError("point/order/exponent length does not match system")
    backend = system[0].backend
    result = scalar_one(backend)
    for i, p in enumerate(system):
        if p.backend != backend:
            raise BackendMismatch("mixed backends in system")
        uni = _univariate_parts(p, i)
        a = numerator_exponents[i]
        d = order[i]
        if a >= d:
            return scalar_zero(backend)
        # peel off (z - w_i)^{d_i}; remainders must vanish
        scale = uni.max_coeff_magnitude()
        reduced = uni
        for _ in range(d):
            reduced, remainder = reduced.synthetic_divide(0, point[i])
            if not tol.is_zero(remainder.coeff(()), scale=scale):
                raise OrderViolation(
                    f"equation {i} does not vanish to order {d} at the node")
        inv_jet = TruncSeries.from_poly(reduced, (point[i],),
                                        (d - 1 - a,)).inverse()
        result = result * inv_jet.coeff((d - 1 - a,))
    return result


def fd_derivative(poly, point, order, step=1e-5):
    """Central-difference partial derivative, iterated per variable.

    Float backend only; a cheap cross-check of symbolic differentiation.
    """
    if poly.backend != FLOAT:
        raise BackendMismatch("finite differences need the float backend")
    point = tuple(point)
    order = tuple(order)
    if len(point) != poly.nvars or len(order) != poly.nvars:
        raise ArityError("point/order length does not match polynomial")
    h = FloatScalar(step)

    def recurse(at, remaining):
        for i, o in enumerate(remaining):
            if o:
                lower = list(remaining)
                lower[i] -= 1
                lower = tuple(lower)
                up = list(at)
                up[i] = up[i] + h
                down = list(at)
                down[i] = down[i] - h
                return (recurse(tuple(up), lower)
                        - recurse(tuple(down), lower)) / (2 * step)
        return poly.evaluate(at)

    return recurse(point, order)
