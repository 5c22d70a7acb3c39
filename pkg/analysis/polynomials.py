"""
Exact polynomial arithmetic over the rationals (or Gaussian rationals) on a
named variable list, plus Sylvester resultants with fraction-free determinants.
"""

import logging
from typing import Dict, Sequence

from sympy import Matrix, Poly, QQ, QQ_I, expand, sympify

from utils.errors import InexactDivisionError

logger = logging.getLogger(__name__)


def make_poly(expr, gens: Sequence, gaussian: bool = False) -> Poly:
    """Poly over QQ (or QQ_I) on the given generators."""
    return Poly(expand(sympify(expr)), *gens, domain=QQ_I if gaussian else QQ)


def _check_gens(p: Poly, q: Poly):
    if p.gens != q.gens:
        raise ValueError(f"Mismatched variable lists: {p.gens} vs {q.gens}")


def _unify(p: Poly, q: Poly):
    _check_gens(p, q)
    if p.domain != q.domain:
        p, q = p.unify(q)
    return p, q


def poly_add(p: Poly, q: Poly) -> Poly:
    p, q = _unify(p, q)
    return p + q


def poly_sub(p: Poly, q: Poly) -> Poly:
    p, q = _unify(p, q)
    return p - q


def poly_mul(p: Poly, q: Poly) -> Poly:
    p, q = _unify(p, q)
    return p * q


def poly_subst(p: Poly, mapping: Dict) -> Poly:
    """Substitute expressions for generators, keeping the generator list."""
    expr = p.as_expr().subs(mapping, simultaneous=True)
    return Poly(expand(expr), *p.gens, domain=p.domain)


def divide_exact(p: Poly, q: Poly) -> Poly:
    """
    p / q when q divides p.

    Raises:
        InexactDivisionError: nonzero remainder.
    """
    p, q = _unify(p, q)
    if q.is_zero:
        raise ZeroDivisionError("Division by the zero polynomial")
    quotient, remainder = p.div(q)
    if not remainder.is_zero:
        raise InexactDivisionError(f"{q.as_expr()} does not divide {p.as_expr()}", remainder=remainder)
    return quotient


def is_zero(p: Poly) -> bool:
    return p.is_zero


def sylvester_matrix(p: Poly, q: Poly, var) -> Matrix:
    """Sylvester matrix of p and q in `var`, rows of p first."""
    pu = Poly(p.as_expr(), var)
    qu = Poly(q.as_expr(), var)
    pc, qc = pu.all_coeffs(), qu.all_coeffs()
    m, n = pu.degree(), qu.degree()
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + pc + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + qc + [0] * (size - n - 1 - i))
    return Matrix(rows) if rows else Matrix.zeros(0, 0)


def resultant(p: Poly, q: Poly, var) -> Poly:
    """
    Res_var(p, q) as the Bareiss determinant of the Sylvester matrix.

    The result lives on the generators of p with `var` eliminated.
    """
    _check_gens(p, q)
    if p.is_zero or q.is_zero:
        raise ValueError("Resultant of the zero polynomial is undefined")
    if var not in p.gens:
        raise ValueError(f"{var} is not a generator of {p.gens}")
    rest = [g for g in p.gens if g != var]
    s = sylvester_matrix(p, q, var)
    det = s.det(method="bareiss") if s.rows else 1
    if not rest:
        return Poly(expand(det), var, domain=p.domain)
    return Poly(expand(det), *rest, domain=p.domain)
