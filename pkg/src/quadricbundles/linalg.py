"""Exact linear algebra: fraction-free elimination over polynomial rings and
plain Gaussian elimination over the rationals.

The polynomial routines (Bareiss determinant, Cramer solve) work over any
:class:`~quadricbundles.rings.VariableTable`; exactness of the interior
divisions is the classical fraction-free elimination guarantee for integral
domains.  The rational routines operate on lists of ``Fraction`` rows and are
used for constant-coefficient change-of-basis and subspace computations.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .rings import LaurentPolynomial, RingError


class SingularMatrixError(RingError):
    pass


# -- polynomial matrices -----------------------------------------------------

def determinant(rows):
    """Exact determinant of a square matrix of Laurent polynomials (Bareiss)."""
    n = len(rows)
    if n == 0:
        raise ValueError("empty matrix")
    if any(len(row) != n for row in rows):
        raise ValueError("matrix is not square")
    table = rows[0][0].table
    m = [list(row) for row in rows]
    sign = 1
    prev = LaurentPolynomial.one(table)
    for k in range(n - 1):
        pivot_row = next((r for r in range(k, n) if not m[r][k].is_zero()), None)
        if pivot_row is None:
            return LaurentPolynomial.zero(table)
        if pivot_row != k:
            m[k], m[pivot_row] = m[pivot_row], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]).exact_div(prev)
            m[i][k] = LaurentPolynomial.zero(table)
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return -det if sign < 0 else det


def _rational_content(poly):
    """Positive rational c with poly/c integer-primitive; 1 for zero."""
    if poly.is_zero():
        return Fraction(1)
    num = 0
    den = 1
    for coeff in poly.terms.values():
        num = gcd(num, coeff.numerator)
        den = den * coeff.denominator // gcd(den, coeff.denominator)
    return Fraction(num, den)


def reduce_fraction(num, den):
    """Reduce a polynomial fraction by exact division, common monomial
    content, and rational content; the denominator's leading coefficient is
    normalized positive."""
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    table = num.table
    if num.is_zero():
        return num, LaurentPolynomial.one(table)
    try:
        return num.exact_div(den), LaurentPolynomial.one(table)
    except RingError:
        pass
    width = len(table)
    shift = tuple(
        min(
            min(e[i] for e in num.terms),
            min(e[i] for e in den.terms),
        )
        for i in range(width)
    )
    if any(shift):
        # dividing num and den by a common monomial is a valid identity in
        # the fraction field even when the monomial is not a unit
        num = LaurentPolynomial(
            table,
            {tuple(a - b for a, b in zip(e, shift)): c for e, c in num.terms.items()},
        )
        den = LaurentPolynomial(
            table,
            {tuple(a - b for a, b in zip(e, shift)): c for e, c in den.terms.items()},
        )
    scale = _rational_content(den)
    num = num * (1 / scale)
    den = den * (1 / scale)
    if den.leading_term()[1] < 0:
        num, den = -num, -den
    if den == LaurentPolynomial.one(table):
        return num, den
    try:
        return num.exact_div(den), LaurentPolynomial.one(table)
    except RingError:
        return num, den


def solve_linear(matrix, rhs):
    """Solve a square polynomial system exactly over the fraction field.

    Returns one ``(numerator, denominator)`` pair per unknown, reduced by
    :func:`reduce_fraction`.  Raises :class:`SingularMatrixError` when the
    determinant vanishes.
    """
    n = len(matrix)
    if any(len(row) != n for row in matrix) or len(rhs) != n:
        raise ValueError("need a square matrix and a matching right-hand side")
    det = determinant(matrix)
    if det.is_zero():
        raise SingularMatrixError("matrix determinant is zero")
    solution = []
    for i in range(n):
        replaced = [
            [rhs[r] if c == i else matrix[r][c] for c in range(n)] for r in range(n)
        ]
        solution.append(reduce_fraction(determinant(replaced), det))
    return solution


# -- rational matrices -------------------------------------------------------

def rref(rows):
    """Reduced row echelon form; returns (rows, pivot column indices)."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return [], []
    cols = len(m[0])
    pivots = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def row_space(rows):
    """Canonical basis (nonzero RREF rows) of the span of the given rows."""
    reduced, pivots = rref(rows)
    return [tuple(row) for row in reduced[: len(pivots)]]


def rational_rank(rows):
    return len(rref(rows)[1])


def nullspace(rows):
    """Basis of the right kernel ``{x : rows @ x = 0}``, canonical order."""
    if not rows:
        return []
    cols = len(rows[0])
    reduced, pivots = rref(rows)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * cols
        vec[f] = Fraction(1)
        for r, c in enumerate(pivots):
            vec[c] = -reduced[r][f]
        basis.append(tuple(vec))
    return basis


def intersect_row_spaces(spaces, dimension):
    """Canonical basis of the intersection of row spaces inside Q^dimension.

    Each subspace is replaced by its constraint set (a basis of its
    orthogonal complement); the intersection is the common kernel.
    """
    constraints = []
    for rows in spaces:
        if rows:
            constraints.extend(nullspace(rows))
        else:
            # the zero subspace is cut out by the full dual basis
            for i in range(dimension):
                vec = [Fraction(0)] * dimension
                vec[i] = Fraction(1)
                constraints.append(tuple(vec))
    if not constraints:
        identity = [
            tuple(Fraction(1 if i == j else 0) for j in range(dimension))
            for i in range(dimension)
        ]
        return row_space(identity)
    return row_space(nullspace(constraints))


def invert_matrix(rows):
    """Exact inverse of a square rational matrix."""
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise ValueError("matrix is not square")
    augmented = [
        [Fraction(x) for x in row] + [Fraction(1 if i == j else 0) for j in range(n)]
        for i, row in enumerate(rows)
    ]
    reduced, pivots = rref(augmented)
    if pivots[:n] != list(range(n)):
        raise SingularMatrixError("matrix is not invertible")
    return [row[n:] for row in reduced[:n]]


def mat_vec(rows, vec):
    return [sum(a * b for a, b in zip(row, vec)) for row in rows]
