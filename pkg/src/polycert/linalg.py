"""Exact dense linear algebra over a Field (Gaussian elimination).

Systems here are small (undetermined-coefficient solves, preimage
searches), so a dict-free dense row representation is enough.
"""

from __future__ import annotations

from .fields import Field


def solve_linear(field: Field, rows: list, rhs: list):
    """Solve A x = b exactly; returns one solution vector or None.

    rows: list of coefficient lists (all the same length); rhs: list of
    field elements.  Free variables are set to zero.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    a = [list(r) + [rhs[i]] for i, r in enumerate(rows)]
    piv_col_of_row = []
    r = 0
    for col in range(n):
        piv = None
        for i in range(r, m):
            if a[i][col]:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = field.inv(a[r][col])
        a[r] = [field.mul(x, inv) for x in a[r]]
        for i in range(m):
            if i != r and a[i][col]:
                factor = a[i][col]
                a[i] = [field.sub(x, field.mul(factor, y)) for x, y in zip(a[i], a[r])]
        piv_col_of_row.append(col)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if a[i][n]:
            return None
    x = [field.zero] * n
    for i, col in enumerate(piv_col_of_row):
        x[col] = a[i][n]
    return x


def solve_poly_combination(target, basis):
    """Express target as a field-linear combination of basis polynomials.

    Returns the coefficient list or None.  All inputs share one context.
    """
    field = target.field
    monomials = set(target.terms)
    for b in basis:
        monomials.update(b.terms)
    order = sorted(monomials)
    rows = [[b.terms.get(e, field.zero) for b in basis] for e in order]
    rhs = [target.terms.get(e, field.zero) for e in order]
    if not rows:
        return [field.zero] * len(basis)
    return solve_linear(field, rows, rhs)
