"""Perron eigendata of presentation adjacency matrices.

For small presentations the characteristic polynomial is factored over the
rationals; when the factor carrying the spectral radius is linear or
quadratic, the eigenvalue and both eigenvectors are computed exactly (as
rationals or elements of a real quadratic field).  Otherwise a
high-precision power iteration is used, with residual pushed below 1e-30.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath
import sympy

from .quadratic import QuadraticNumber, _squarefree_split

EXACT_STATE_LIMIT = 12
POWER_DPS = 60
POWER_RESIDUAL = mpmath.mpf("1e-30")


@dataclass(frozen=True)
class PerronData:
    """Spectral radius with positive right/left eigenvectors."""

    eigenvalue: object  # Fraction | QuadraticNumber | mpmath.mpf
    right: tuple
    left: tuple
    exact: bool
    residual: float | None = None

    def stationary(self) -> tuple:
        """State weights l_s r_s, normalized to total 1."""
        lr = [l * r for l, r in zip(self.left, self.right)]
        total = lr[0]
        for x in lr[1:]:
            total = total + x
        return tuple(x / total for x in lr)


def _kernel_vector(rows, one):
    """A nonzero kernel vector of a singular square matrix over a field."""
    n = len(rows)
    m = [list(r) for r in rows]
    zero = one - one
    pivots = {}  # column -> row
    row = 0
    for col in range(n):
        pivot = next((i for i in range(row, n) if m[i][col] != zero), None)
        if pivot is None:
            continue
        m[row], m[pivot] = m[pivot], m[row]
        inv = one / m[row][col]
        m[row] = [x * inv for x in m[row]]
        for i in range(n):
            if i != row and m[i][col] != zero:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[row])]
        pivots[col] = row
        row += 1
    free = next((c for c in range(n) if c not in pivots), None)
    if free is None:
        raise ArithmeticError("matrix is nonsingular; no kernel vector")
    v = [zero] * n
    v[free] = one
    for col, r in pivots.items():
        v[col] = -m[r][free] * one
    return v


def _power_iteration(matrix, dps=POWER_DPS, max_iter=200_000):
    """Dominant eigenpair of a non-negative integer matrix, high precision."""
    n = len(matrix)
    with mpmath.workdps(dps):
        # shift by I so the dominant eigenvalue is simple on each closed class
        a = [[mpmath.mpf(matrix[i][j] + (i == j)) for j in range(n)] for i in range(n)]
        v = [mpmath.mpf(1) for _ in range(n)]
        lam = mpmath.mpf(0)
        for _ in range(max_iter):
            w = [sum(a[i][j] * v[j] for j in range(n)) for i in range(n)]
            norm = max(w)
            if norm == 0:
                break
            w = [x / norm for x in w]
            lam_new = sum(
                sum(a[i][j] * w[j] for j in range(n)) * w[i] for i in range(n)
            ) / sum(x * x for x in w)
            res = max(
                abs(sum(a[i][j] * w[j] for j in range(n)) - lam_new * w[i])
                for i in range(n)
            )
            v, lam = w, lam_new
            if res < POWER_RESIDUAL:
                break
        return lam - 1, v, float(res)


def perron_eigendata(presentation, exact_state_limit=EXACT_STATE_LIMIT) -> PerronData:
    """Eigendata of the adjacency matrix of the essential part."""
    live = presentation.essential_part()
    matrix = live.adjacency()
    n = len(matrix)
    if n <= exact_state_limit:
        data = _exact_eigendata(matrix)
        if data is not None:
            return data
    lam, right, res = _power_iteration(matrix)
    transposed = [[matrix[j][i] for j in range(n)] for i in range(n)]
    _, left, res2 = _power_iteration(transposed)
    return PerronData(
        eigenvalue=lam,
        right=tuple(right),
        left=tuple(left),
        exact=False,
        residual=max(res, res2),
    )


def _horner(coeffs, t: float) -> float:
    acc = 0.0
    for c in coeffs:
        acc = acc * t + c
    return acc


def _exact_eigendata(matrix) -> PerronData | None:
    n = len(matrix)
    x = sympy.Symbol("x")
    poly = sympy.Matrix(matrix).charpoly(x)
    factors = sympy.factor_list(poly.as_expr())[1]
    lam_num, _, _ = _power_iteration(matrix, dps=40, max_iter=20_000)
    lam_f = float(lam_num)
    best = None
    for fac, _ in factors:
        p = sympy.Poly(fac, x)
        coeffs = [float(c) for c in p.all_coeffs()]
        val = abs(_horner(coeffs, lam_f))
        scale = 1 + sum(abs(c) for c in coeffs)
        if val / scale < 1e-6 and (best is None or val < best[0]):
            best = (val, p)
    if best is None:
        return None
    coeffs = [int(c) for c in best[1].all_coeffs()]
    if coeffs[0] < 0:
        coeffs = [-c for c in coeffs]
    if len(coeffs) == 2:  # a x + b, root -b/a
        a, b = coeffs
        lam = Fraction(-b, a)
    elif len(coeffs) == 3:  # a x^2 + b x + c, larger root
        a, b, c = coeffs
        disc = b * b - 4 * a * c
        if disc <= 0:
            return None
        s, d = _squarefree_split(disc)
        if d == 1:
            lam = Fraction(-b + s, 2 * a)
        else:
            lam = QuadraticNumber(Fraction(-b, 2 * a), Fraction(s, 2 * a), d)
    else:
        return None
    if abs(float(lam) - lam_f) > 1e-6:
        return None
    one = lam / lam if isinstance(lam, QuadraticNumber) else Fraction(1)
    zero = one - one

    def shifted(transpose: bool):
        return [
            [
                (matrix[j][i] if transpose else matrix[i][j]) * one
                - (lam if i == j else zero)
                for j in range(n)
            ]
            for i in range(n)
        ]

    right = _make_positive(_kernel_vector(shifted(False), one))
    left = _make_positive(_kernel_vector(shifted(True), one))
    if right is None or left is None:
        return None
    return PerronData(
        eigenvalue=lam, right=tuple(right), left=tuple(left), exact=True, residual=0.0
    )


def _make_positive(vec):
    zero = vec[0] - vec[0]
    if all(x <= zero for x in vec):
        vec = [-x for x in vec]
    if any(x <= zero for x in vec):
        return None
    return vec
