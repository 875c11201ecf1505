"""Weighted Z-filtrations on A, top forms, and associated graded data.

Weights live on x_1..x_m (z, t carry weight 0); the filtration is
realized on Laurent representatives through the embedding
A -> k[x, x^-1, z, t], where top forms are plain weighted top forms.
The associated graded ring is again a hypersurface presentation with F
replaced by its top form, valid whenever no x_j divides that top form.
"""

from __future__ import annotations

from dataclasses import dataclass

from .poly import NotDivisible, Poly, PolyError
from .presentation import AElem, LaurentRep, Presentation, laurent_embed


@dataclass(frozen=True)
class WeightVector:
    e: tuple

    def __post_init__(self):
        object.__setattr__(self, "e", tuple(int(x) for x in self.e))

    def weights_for(self, pres: Presentation) -> dict:
        if len(self.e) != pres.m:
            raise PolyError(f"weight vector length {len(self.e)} != m={pres.m}")
        w = {f"X{i+1}": self.e[i] for i in range(pres.m)}
        w["Z"] = 0
        w["T"] = 0
        return w

    def to_json(self):
        return list(self.e)


@dataclass(frozen=True)
class GradedData:
    d: int
    ell: int
    F_d: Poly

    def to_json(self):
        return {"d": self.d, "ell": self.ell, "F_d": str(self.F_d)}


def graded_data(pres: Presentation, w: WeightVector) -> GradedData:
    """Weighted degree d of F, its top form, and ell = d - sum(r_i e_i)."""
    weights = w.weights_for(pres)
    d, F_d = pres.F.top_form(weights)
    ell = d - sum(ri * ei for ri, ei in zip(pres.r, w.e))
    return GradedData(d, ell, F_d)


@dataclass(frozen=True)
class GradedPresentation:
    presentation: Presentation
    hypothesis_ok: bool
    failing_index: int | None
    weights: WeightVector
    data: GradedData
    generator_weights: dict

    def to_json(self):
        out = {
            "hypothesis_ok": self.hypothesis_ok,
            "weights": self.weights.to_json(),
            "data": self.data.to_json(),
            "generator_weights": dict(self.generator_weights),
            "presentation": self.presentation.to_json(),
        }
        if self.failing_index is not None:
            out["failing_index"] = self.failing_index
        return out


def graded_presentation(pres: Presentation, w: WeightVector) -> GradedPresentation:
    """The associated graded presentation X^r Y - F_d.

    hypothesis_ok records x_j not dividing F_d for every j; when it fails
    the failing index is reported and the returned presentation is still
    the rewriting system X^r Y -> F_d (useful for representatives, but
    not a domain presentation of the graded ring).
    """
    data = graded_data(pres, w)
    failing = None
    for j in range(1, pres.m + 1):
        xj = Poly.var(pres.ctx, pres.field, f"X{j}")
        if xj.divides(data.F_d):
            failing = j
            break
    ell = data.ell
    gen_weights = {f"X{i+1}": w.e[i] for i in range(pres.m)}
    gen_weights.update({"Z": 0, "T": 0, "Y": ell})
    graded = Presentation(pres.m, pres.r, data.F_d, pres.field, _allow_zero_f=True)
    return GradedPresentation(
        presentation=graded,
        hypothesis_ok=failing is None,
        failing_index=failing,
        weights=w,
        data=data,
        generator_weights=gen_weights,
    )


def fdk1_chain(pres: Presentation) -> GradedPresentation:
    """Double regrading: weights (-1, 0, ..., 0) then (-1, ..., -1).

    The first step keeps exactly the X1-free part of F; the second keeps
    the part free of all x's, which is f(Z, T).  The final presentation
    is X^r Y - f with generator weights x_i -> -1, z, t -> 0 and
    y -> r_1 + ... + r_m, and the divisibility hypothesis holds since f
    is a nonzero polynomial in Z, T alone.
    """
    w1 = WeightVector((-1,) + (0,) * (pres.m - 1))
    g1 = graded_presentation(pres, w1)
    w2 = WeightVector((-1,) * pres.m)
    g2 = graded_presentation(g1.presentation, w2)
    expected_f = pres.f
    if g2.presentation.F != expected_f:
        raise PolyError("internal: double regrading did not isolate f")
    if not g2.hypothesis_ok:
        raise PolyError("internal: x_j divides f, impossible for f != 0 in k[Z,T]")
    gen_weights = {f"X{i+1}": -1 for i in range(pres.m)}
    gen_weights.update({"Z": 0, "T": 0, "Y": sum(pres.r)})
    return GradedPresentation(
        presentation=g2.presentation,
        hypothesis_ok=True,
        failing_index=None,
        weights=w2,
        data=g2.data,
        generator_weights=gen_weights,
    )


def rho(a: AElem, w: WeightVector) -> AElem:
    """Top-form map into the associated graded presentation.

    Computed on the Laurent representative: take the weighted top form of
    the numerator and re-express over the denominator monomial through
    the graded relation.  Multiplicative whenever the graded presentation
    satisfies the divisibility hypothesis (the graded ring is a domain).
    """
    if a.is_zero():
        raise PolyError("rho of zero")
    pres = a.pres
    graded = graded_presentation(pres, w)
    weights = w.weights_for(pres)
    lau = laurent_embed(a)
    _, top = lau.numerator.top_form(weights)
    den = lau.den_powers
    if not any(den):
        return graded.presentation.elem(top)
    # lift u / X^den: find the smallest k with k*r >= den componentwise
    k = 0
    for d, ri in zip(den, pres.r):
        need = -(-d // ri)  # ceil
        k = max(k, need)
    extra = tuple(k * ri - d for ri, d in zip(pres.r, den))
    rep = (
        Poly.var(pres.ctx, pres.field, "Y") ** k
        * pres.x_product(extra)
        * top
    )
    return graded.presentation.elem(rep)
