"""Ideal membership by critical-pair completion with exact cofactors.

The generator set is completed under graded-lex S-polynomial reduction up
to a hard degree cap.  Every basis element carries its expression in the
original generators, so an In verdict returns cofactors that recombine to
the target exactly.  NotIn is only reported when the completion finished
below the cap (the basis is then a Groebner basis and a nonzero normal
form is a proof); otherwise the verdict is Inconclusive.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .poly import Poly, PolyError, _grlex_key


@dataclass(frozen=True)
class MembershipResult:
    verdict: str  # "in" | "not_in" | "inconclusive"
    cofactors: list | None = None
    normal_form: Poly | None = None
    degree_cap: int = 0

    @property
    def is_in(self):
        return self.verdict == "in"


class _Tracked:
    """A polynomial plus its expression in the original generators."""

    __slots__ = ("poly", "expr")

    def __init__(self, poly: Poly, expr: list):
        self.poly = poly
        self.expr = expr


def _reduce(p: Poly, p_expr: list, basis: list) -> tuple:
    """Fully reduce p by basis; returns (normal form, updated expression)."""
    f = p.field
    ctx = p.ctx
    nf_terms: dict = {}
    work = dict(p.terms)
    expr = [e for e in p_expr]
    while work:
        e = max(work, key=_grlex_key)
        c = work.pop(e)
        reducer = None
        for t in basis:
            le, lc = t.poly.lead_term()
            if all(a >= b for a, b in zip(e, le)):
                reducer = (t, le, lc)
                break
        if reducer is None:
            nf_terms[e] = c
            continue
        t, le, lc = reducer
        qe = tuple(a - b for a, b in zip(e, le))
        qc = f.div(c, lc)
        mono = Poly(ctx, f, {qe: qc})
        for e2, c2 in t.poly.terms.items():
            if e2 == le:
                continue
            key = tuple(a + b for a, b in zip(qe, e2))
            s = f.sub(work.get(key, f.zero), f.mul(qc, c2))
            if s:
                work[key] = s
            else:
                work.pop(key, None)
        expr = [ei - mono * gi for ei, gi in zip(expr, t.expr)]
    return Poly(ctx, f, nf_terms), expr


def ideal_membership(target: Poly, gens: list, degree_cap: int | None = None) -> MembershipResult:
    """Decide target in (gens) inside the free polynomial ring.

    degree_cap bounds the degree of S-polynomial lcms processed during
    completion; pairs above the cap truncate the completion and downgrade
    a nonzero normal form to Inconclusive.
    """
    if not gens:
        raise PolyError("empty generator list")
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        raise PolyError("all generators are zero")
    ctx, f = target.ctx, target.field
    for g in gens:
        if g.ctx != ctx or g.field != f:
            raise PolyError("generator context/field mismatch")
    max_deg = max(
        [g.total_degree() for g in gens]
        + ([target.total_degree()] if not target.is_zero() else [0])
    )
    if degree_cap is None:
        degree_cap = 2 * max_deg + 4
    if degree_cap < max_deg:
        raise PolyError("degree_cap below the inputs' degree")

    n = len(gens)

    def unit_expr(i: int) -> list:
        return [
            Poly.const(ctx, f, f.one) if j == i else Poly.zero(ctx, f)
            for j in range(n)
        ]

    basis: list = []
    for i, g in enumerate(gens):
        nf, expr = _reduce(g, unit_expr(i), basis)
        if not nf.is_zero():
            basis.append(_Tracked(nf, expr))

    pairs = [(i, j) for i in range(len(basis)) for j in range(i)]
    truncated = False
    while pairs:
        # normal strategy: smallest lcm degree first
        def lcm_deg(pair):
            ei, _ = basis[pair[0]].poly.lead_term()
            ej, _ = basis[pair[1]].poly.lead_term()
            return sum(max(a, b) for a, b in zip(ei, ej))

        pairs.sort(key=lcm_deg)
        i, j = pairs.pop(0)
        ti, tj = basis[i], basis[j]
        ei, ci = ti.poly.lead_term()
        ej, cj = tj.poly.lead_term()
        lcm = tuple(max(a, b) for a, b in zip(ei, ej))
        if sum(lcm) > degree_cap:
            truncated = True
            continue
        if all(a + b == l for a, b, l in zip(ei, ej, lcm)):
            continue  # coprime lead terms: S-poly reduces to zero
        mi = Poly(ctx, f, {tuple(a - b for a, b in zip(lcm, ei)): f.inv(ci)})
        mj = Poly(ctx, f, {tuple(a - b for a, b in zip(lcm, ej)): f.inv(cj)})
        s = mi * ti.poly - mj * tj.poly
        s_expr = [mi * a - mj * b for a, b in zip(ti.expr, tj.expr)]
        nf, expr = _reduce(s, s_expr, basis)
        if not nf.is_zero():
            basis.append(_Tracked(nf, expr))
            k = len(basis) - 1
            pairs.extend((k, t) for t in range(k))

    nf, expr = _reduce(target, [Poly.zero(ctx, f)] * n, basis)
    if nf.is_zero():
        cofactors = [-e for e in expr]
        return MembershipResult("in", cofactors=cofactors, degree_cap=degree_cap)
    if truncated:
        return MembershipResult("inconclusive", normal_form=nf, degree_cap=degree_cap)
    return MembershipResult("not_in", normal_form=nf, degree_cap=degree_cap)
