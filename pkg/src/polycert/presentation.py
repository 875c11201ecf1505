"""The ring A = k[X1..Xm, Y, Z, T] / (X1^r1...Xm^rm * Y - F) as a
confluent one-rule rewriting system.

The single rule X^r*Y -> F is oriented so that Y-degrees drop; F contains
no Y, so there are no critical pairs and normal forms are unique.  The
Laurent embedding y -> F / X^r into k[x, x^-1, z, t] provides a second,
independent equality oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .fields import Field
from .parse import parse_poly
from .poly import (
    ContextError,
    NotDivisible,
    Poly,
    PolyError,
    VarContext,
    presentation_context,
)


class PresentationError(ValueError):
    pass


class Presentation:
    """Defining data (m, r, F, field) of the hypersurface ring A."""

    __slots__ = ("m", "r", "F", "field", "ctx", "f", "g", "G")

    def __init__(self, m: int, r: tuple, F: Poly, field: Field, _allow_zero_f: bool = False):
        if m < 1:
            raise PresentationError("m must be positive")
        r = tuple(int(x) for x in r)
        if len(r) != m:
            raise PresentationError(f"r must have length m={m}")
        for ri in r:
            if ri <= 1:
                raise PresentationError(f"exponent {ri} violates r_i > 1")
        ctx = presentation_context(m)
        if F.ctx != ctx:
            F = F.rename_context(ctx)
        if F.degree_in("Y"):
            raise PresentationError("F must not involve Y")
        zero_x = {f"X{i}": Poly.zero(ctx, field) for i in range(1, m + 1)}
        f = F.substitute(zero_x)
        if f.is_zero() and not _allow_zero_f:
            raise PresentationError("F(0,...,0,Z,T) must be nonzero")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "F", F)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "f", f)
        # structured decomposition F = f + X1...Xm * g, when it exists
        xerase = Poly.monomial(ctx, field, {f"X{i}": 1 for i in range(1, m + 1)})
        g = None
        try:
            g = (F - f).exact_divide(xerase)
        except NotDivisible:
            g = None
        except ZeroDivisionError:
            g = None
        object.__setattr__(self, "g", g)
        relation = (
            Poly.monomial(ctx, field, {f"X{i}": r[i - 1] for i in range(1, m + 1)})
            * Poly.var(ctx, field, "Y")
            - F
        )
        object.__setattr__(self, "G", relation)

    def __setattr__(self, *a):
        raise AttributeError("Presentation is immutable")

    # -- helpers --------------------------------------------------------

    @property
    def is_structured(self) -> bool:
        return self.g is not None

    def x_names(self) -> list:
        return [f"X{i}" for i in range(1, self.m + 1)]

    def x_product(self, powers: tuple | None = None) -> Poly:
        powers = powers if powers is not None else (1,) * self.m
        return Poly.monomial(
            self.ctx, self.field, {f"X{i}": powers[i - 1] for i in range(1, self.m + 1)}
        )

    def x_r_monomial(self) -> Poly:
        return self.x_product(self.r)

    def generator(self, name: str) -> "AElem":
        return AElem(self, Poly.var(self.ctx, self.field, name))

    def elem(self, p: Poly) -> "AElem":
        return normal_form(p, self)

    def parse_elem(self, text: str) -> "AElem":
        return self.elem(parse_poly(text, self.ctx, self.field))

    def __eq__(self, other):
        return (
            isinstance(other, Presentation)
            and self.m == other.m
            and self.r == other.r
            and self.F == other.F
            and self.field == other.field
        )

    def __hash__(self):
        return hash((self.m, self.r, self.F, self.field))

    def __repr__(self):
        return f"Presentation(m={self.m}, r={self.r}, F={self.F}, field={self.field})"

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "r": list(self.r),
            "field": self.field.spec(),
            "F": str(self.F),
        }

    @staticmethod
    def from_json(data: Mapping) -> "Presentation":
        from .fields import parse_field

        field = parse_field(data["field"])
        m = int(data["m"])
        ctx = presentation_context(m)
        F = parse_poly(data["F"], ctx, field)
        return make_presentation(m, tuple(data["r"]), F, field)


def make_presentation(m: int, r: tuple, F: Poly, field: Field) -> Presentation:
    """Validate and build a Presentation (r_i > 1, f != 0, no Y in F)."""
    return Presentation(m, r, F, field)


class AElem:
    """An element of A, held as its unique normal-form representative."""

    __slots__ = ("pres", "rep")

    def __init__(self, pres: Presentation, rep: Poly):
        object.__setattr__(self, "pres", pres)
        object.__setattr__(self, "rep", _rewrite(rep, pres))

    def __setattr__(self, *a):
        raise AttributeError("AElem is immutable")

    def __add__(self, other):
        self._check(other)
        return AElem(self.pres, self.rep + other.rep)

    def __sub__(self, other):
        self._check(other)
        return AElem(self.pres, self.rep - other.rep)

    def __mul__(self, other):
        self._check(other)
        return AElem(self.pres, self.rep * other.rep)

    def __neg__(self):
        return AElem(self.pres, -self.rep)

    def __pow__(self, n: int):
        return AElem(self.pres, self.rep**n)

    def _check(self, other):
        if not isinstance(other, AElem) or other.pres != self.pres:
            raise PresentationError("presentation mismatch")

    def is_zero(self) -> bool:
        return self.rep.is_zero()

    def __eq__(self, other):
        return isinstance(other, AElem) and self.pres == other.pres and self.rep == other.rep

    def __hash__(self):
        return hash((self.pres, self.rep))

    def __str__(self):
        return str(self.rep)

    def __repr__(self):
        return f"AElem({self.rep})"


def _rewrite(p: Poly, pres: Presentation) -> Poly:
    """Exhaustively rewrite X^r * Y -> F.  Order-independent (single rule)."""
    ctx = p.ctx
    field = p.field
    m, r = pres.m, pres.r
    xi = [ctx.index[f"X{i}"] for i in range(1, m + 1)]
    yi = ctx.index["Y"]
    F = pres.F if pres.F.ctx == ctx else pres.F.rename_context(ctx)

    f_powers = {0: Poly.const(ctx, field, field.one), 1: F}

    def f_power(k: int) -> Poly:
        got = f_powers.get(k)
        if got is None:
            got = f_power(k - 1) * F
            f_powers[k] = got
        return got

    work = p
    while True:
        stable: dict = {}
        pending: list = []
        for e, c in work.terms.items():
            b = e[yi]
            if b:
                k = min([b] + [e[i] // ri for i, ri in zip(xi, r)])
            else:
                k = 0
            if k:
                pending.append((e, c, k))
            else:
                stable[e] = c
        if not pending:
            return Poly(ctx, field, stable)
        acc = Poly(ctx, field, stable)
        for e, c, k in pending:
            ne = list(e)
            ne[yi] -= k
            for i, ri in zip(xi, r):
                ne[i] -= k * ri
            acc = acc + Poly(ctx, field, {tuple(ne): c}) * f_power(k)
        work = acc


def normal_form(p: Poly, pres: Presentation) -> AElem:
    """The canonical representative of p's class in A."""
    if p.ctx != pres.ctx:
        p = p.rename_context(pres.ctx)
    return AElem(pres, p)


def a_equal(a: AElem, b: AElem) -> bool:
    if a.pres != b.pres:
        raise PresentationError("presentation mismatch")
    return a.rep == b.rep


@dataclass(frozen=True)
class LaurentRep:
    """numerator / X^den_powers, the image in B[x1^-1, ..., xm^-1]."""

    numerator: Poly
    den_powers: tuple

    def __eq__(self, other):
        return (
            isinstance(other, LaurentRep)
            and self.numerator == other.numerator
            and self.den_powers == other.den_powers
        )


def laurent_embed(a: AElem) -> LaurentRep:
    """Substitute y -> F / X^r and clear to one monomial denominator.

    Injective, hence usable as an independent equality oracle.
    """
    pres = a.pres
    field = pres.field
    p = a.rep
    ctx = p.ctx
    F = pres.F if pres.F.ctx == ctx else pres.F.rename_context(ctx)
    yi = ctx.index["Y"]
    B = max((e[yi] for e in p.terms), default=0)
    m = pres.m
    xi = [ctx.index[f"X{i}"] for i in range(1, m + 1)]
    f_pow = {0: Poly.const(ctx, field, field.one)}

    def f_power(k):
        if k not in f_pow:
            f_pow[k] = f_power(k - 1) * F
        return f_pow[k]

    num = Poly.zero(ctx, field)
    for e, c in p.terms.items():
        b = e[yi]
        ne = list(e)
        ne[yi] = 0
        for i, ri in zip(xi, pres.r):
            ne[i] += (B - b) * ri
        num = num + Poly(ctx, field, {tuple(ne): c}) * f_power(b)
    den = tuple(B * ri for ri in pres.r)
    # cancel common X powers
    if num.is_zero():
        return LaurentRep(num, (0,) * m)
    mins = [min(e[i] for e in num.terms) for i in xi]
    cancel = [min(mn, d) for mn, d in zip(mins, den)]
    if any(cancel):
        shifted = {}
        for e, c in num.terms.items():
            ne = list(e)
            for j, i in enumerate(xi):
                ne[i] -= cancel[j]
            shifted[tuple(ne)] = c
        num = Poly(ctx, field, shifted)
        den = tuple(d - cn for d, cn in zip(den, cancel))
    return LaurentRep(num, den)


def laurent_equal(a: AElem, b: AElem) -> bool:
    """Equality via the Laurent embedding (cross-multiplied comparison)."""
    la, lb = laurent_embed(a), laurent_embed(b)
    pres = a.pres
    xa = pres.x_product(tuple(lb.den_powers))
    xb = pres.x_product(tuple(la.den_powers))
    return la.numerator * xa == lb.numerator * xb


class AEndo:
    """A k-endomorphism of A given by generator images, relation-checked."""

    __slots__ = ("pres", "images", "relation_checked")

    def __init__(self, pres: Presentation, images: Mapping[str, AElem], check: bool = True):
        names = pres.x_names() + ["Y", "Z", "T"]
        imgs = {}
        for n in names:
            if n not in images:
                raise PresentationError(f"missing image for generator {n}")
            img = images[n]
            if img.pres != pres:
                raise PresentationError("image from a different presentation")
            imgs[n] = img
        object.__setattr__(self, "pres", pres)
        object.__setattr__(self, "images", imgs)
        if check:
            residue = self._relation_residue()
            if not residue.is_zero():
                raise PresentationError(
                    f"relation not preserved; nonzero normal form {residue}"
                )
        object.__setattr__(self, "relation_checked", check)

    def __setattr__(self, *a):
        raise AttributeError("AEndo is immutable")

    def _relation_residue(self) -> AElem:
        return self.apply_poly(self.pres.G)

    def apply_poly(self, p: Poly) -> AElem:
        assignment = {n: img.rep for n, img in self.images.items()}
        return self.pres.elem(p.substitute(assignment))

    def apply(self, a: AElem) -> AElem:
        return self.apply_poly(a.rep)

    @staticmethod
    def identity(pres: Presentation) -> "AEndo":
        return AEndo(
            pres,
            {n: pres.generator(n) for n in pres.x_names() + ["Y", "Z", "T"]},
        )


def endo_from_images(pres: Presentation, images: Mapping[str, AElem]) -> AEndo:
    return AEndo(pres, images)


def compose_endo(phi: AEndo, psi: AEndo) -> AEndo:
    """The endomorphism a -> phi(psi(a))."""
    if phi.pres != psi.pres:
        raise PresentationError("presentation mismatch")
    images = {n: phi.apply(img) for n, img in psi.images.items()}
    return AEndo(phi.pres, images)
