"""Exponential maps on A and one-sided invariant witnesses.

The two canonical maps move t (resp. z) by X^r * U and correct y by the
exact quotient (F(..., t + X^r U) - F) / X^r; both satisfy the evaluation
axiom at U = 0 and the one-parameter composition law.  Axioms are checked
symbolically on generators, which determines the maps as k-algebra
homomorphisms.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .poly import NotDivisible, Poly
from .presentation import AElem, Presentation, PresentationError


@dataclass(frozen=True)
class AxiomReport:
    epsilon_ok: bool
    composition_ok: bool
    relation_ok: bool
    residues: dict = dc_field(default_factory=dict)

    @property
    def verified(self):
        return self.epsilon_ok and self.composition_ok and self.relation_ok

    def to_json(self):
        return {
            "epsilon_axiom": self.epsilon_ok,
            "composition_axiom": self.composition_ok,
            "relation_preserved": self.relation_ok,
            "residues": {k: str(v) for k, v in self.residues.items()},
        }


class ExpMap:
    """Generator images in A[U]; axiom_status is set by exp_verify."""

    __slots__ = ("pres", "images", "axiom_status", "label")

    def __init__(self, pres: Presentation, images: dict, label: str = ""):
        ext = pres.ctx.extend("U")
        imgs = {}
        for name in pres.x_names() + ["Y", "Z", "T"]:
            if name not in images:
                raise PresentationError(f"missing image for generator {name}")
            p = images[name]
            if p.ctx != ext:
                p = p.rename_context(ext)
            imgs[name] = AElem(pres, p).rep
        object.__setattr__(self, "pres", pres)
        object.__setattr__(self, "images", imgs)
        object.__setattr__(self, "axiom_status", "unverified")
        object.__setattr__(self, "label", label)

    def __setattr__(self, *a):
        raise AttributeError("ExpMap is immutable")

    def _set_status(self, status: str):
        object.__setattr__(self, "axiom_status", status)

    @property
    def ext_ctx(self):
        return self.pres.ctx.extend("U")

    def is_trivial(self) -> bool:
        """True when no generator image involves U."""
        for name, img in self.images.items():
            if img.degree_in("U"):
                return False
        return True

    def apply_poly(self, p: Poly) -> AElem:
        """Apply to a polynomial in the presentation context; lands in A[U]."""
        ext = self.ext_ctx
        assignment = dict(self.images)
        if p.ctx != ext:
            p = p.rename_context(ext)
        return AElem(self.pres, p.substitute(assignment))

    def apply(self, a: AElem) -> AElem:
        return self.apply_poly(a.rep)

    def fixes(self, a: AElem) -> bool:
        """phi(a) == a, checked exactly in A[U]."""
        image = self.apply(a)
        lifted = AElem(self.pres, a.rep.rename_context(self.ext_ctx))
        return image == lifted

    def to_json(self) -> dict:
        return {
            "images": {k: str(v) for k, v in self.images.items()},
            "indeterminate": "U",
            "axiom_status": self.axiom_status,
            "label": self.label,
        }


def exp_verify(phi: ExpMap) -> AxiomReport:
    """Check both exponential-map axioms and relation preservation.

    Axioms are checked on the generators of A; both sides of each axiom
    are k-algebra homomorphisms, so generator agreement settles them.
    """
    pres = phi.pres
    field = pres.field
    ext = phi.ext_ctx
    ctx2 = pres.ctx.extend("U", "V")
    zeroU = Poly.zero(ext, field)
    residues = {}

    eps_ok = True
    for name, img in phi.images.items():
        at0 = img.substitute({"U": zeroU})
        back = AElem(pres, at0)
        gen = AElem(pres, Poly.var(ext, field, name))
        if back != gen:
            eps_ok = False
            residues[f"epsilon:{name}"] = back.rep - gen.rep

    # relation: the defining relation must map to zero in A[U]
    rel_img = phi.apply_poly(pres.G)
    rel_ok = rel_img.is_zero()
    if not rel_ok:
        residues["relation"] = rel_img.rep

    # composition: phi_V(phi_U(gen)) == phi_(U+V)(gen) in A[U,V]
    comp_ok = True
    U2 = Poly.var(ctx2, field, "U")
    V2 = Poly.var(ctx2, field, "V")
    images_V = {
        name: img.rename_context(ctx2, {"U": "V"}) for name, img in phi.images.items()
    }
    images_V["U"] = U2
    for name, img in phi.images.items():
        lhs = AElem(pres, img.rename_context(ctx2).substitute(images_V))
        rhs = AElem(
            pres,
            img.rename_context(ctx2).substitute({"U": U2 + V2}),
        )
        if lhs != rhs:
            comp_ok = False
            residues[f"composition:{name}"] = lhs.rep - rhs.rep

    report = AxiomReport(eps_ok, comp_ok, rel_ok, residues)
    phi._set_status("verified" if report.verified else "unverified")
    return report


def _build_shift(pres: Presentation, moved: str, fixed: str, label: str) -> ExpMap:
    """phi(moved) = moved + X^r*U, phi(y) = y + U*v with v exact."""
    field = pres.field
    ext = pres.ctx.extend("U")
    U = Poly.var(ext, field, "U")
    xr = pres.x_r_monomial().rename_context(ext)
    F = pres.F.rename_context(ext)
    moved_img = Poly.var(ext, field, moved) + xr * U
    shifted = F.substitute(
        {moved: moved_img, fixed: Poly.var(ext, field, fixed)}
    )
    diff = shifted - F
    try:
        v = diff.exact_divide(xr * U) if not diff.is_zero() else Poly.zero(ext, field)
    except NotDivisible as exc:  # would indicate an arithmetic bug
        raise PresentationError(
            f"internal: F(..., {moved} + X^r U) - F not divisible by X^r*U"
        ) from exc
    images = {name: Poly.var(ext, field, name) for name in pres.x_names() + ["Y", "Z", "T"]}
    images[moved] = moved_img
    images["Y"] = Poly.var(ext, field, "Y") + U * v
    phi = ExpMap(pres, images, label=label)
    report = exp_verify(phi)
    if not report.verified:
        raise PresentationError(f"internal: {label} failed axiom verification")
    return phi


def build_phi1(pres: Presentation) -> ExpMap:
    """The exponential map fixing x_1..x_m and z, shifting t by X^r*U."""
    return _build_shift(pres, "T", "Z", "phi1")


def build_phi2(pres: Presentation) -> ExpMap:
    """The exponential map fixing x_1..x_m and t, shifting z by X^r*U."""
    return _build_shift(pres, "Z", "T", "phi2")


@dataclass(frozen=True)
class InvariantWitness:
    map: ExpMap
    fixed_generators: tuple  # generator names with phi(b) == b verified

    def reverify(self) -> bool:
        pres = self.map.pres
        return all(
            self.map.fixes(pres.generator(name)) for name in self.fixed_generators
        )

    def to_json(self):
        return {
            "map": self.map.to_json(),
            "fixed_generators": list(self.fixed_generators),
        }


@dataclass(frozen=True)
class DkWitnessReport:
    witnesses: tuple
    flags: tuple = ()

    @property
    def degenerate(self):
        return not self.witnesses

    def to_json(self):
        return {
            "witnesses": [w.to_json() for w in self.witnesses],
            "flags": list(self.flags),
            "conclusion": "k[x_1..x_m, z, t] is generated by verified "
            "invariant-ring members of the two maps",
        }


def dk_witness(pres: Presentation) -> DkWitnessReport:
    """Two exponential maps whose verified fixed generators cover
    {x_1..x_m, z, t}: a constructive lower bound for the invariant-ring
    union inside A."""
    flags = []
    if pres.f.is_constant():
        flags.append("f is a nonzero constant: the x_i are units; "
                     "non-unit hypotheses elsewhere are unmet")
    phi1 = build_phi1(pres)
    phi2 = build_phi2(pres)
    if phi1.is_trivial() and phi2.is_trivial():
        return DkWitnessReport((), flags=tuple(flags) + ("degenerate: both maps trivial",))
    w1 = InvariantWitness(phi1, tuple(pres.x_names() + ["Z"]))
    w2 = InvariantWitness(phi2, tuple(pres.x_names() + ["T"]))
    for w in (w1, w2):
        if not w.reverify():
            raise PresentationError("internal: claimed fixed generator moved")
    return DkWitnessReport((w1, w2), flags=tuple(flags))


@dataclass(frozen=True)
class MlUpperReport:
    verdict: str  # "established" | "hypothesis-not-met"
    detail: str
    witnesses: tuple = ()
    flags: tuple = ()

    def to_json(self):
        return {
            "verdict": self.verdict,
            "detail": self.detail,
            "witnesses": [w.to_json() for w in self.witnesses],
            "flags": list(self.flags),
        }


def ml_upper_report(pres: Presentation) -> MlUpperReport:
    """Certify the upper bound: every exponential-map-invariant element
    common to all maps lies in k[x_1..x_m], given the two hypotheses
    (F involves Z or T; f is not a unit, which keeps the x_i non-units)."""
    involves_zt = pres.F.degree_in("Z") > 0 or pres.F.degree_in("T") > 0
    if not involves_zt:
        return MlUpperReport(
            "hypothesis-not-met",
            "F lies in k[X1..Xm]; the two canonical maps degenerate",
        )
    if pres.f.is_constant():
        return MlUpperReport(
            "hypothesis-not-met",
            "f is a unit, so the x_i are units and the bound does not follow",
            flags=("non-unit check used the sufficient condition f not in k*",),
        )
    report = dk_witness(pres)
    return MlUpperReport(
        "established",
        "common invariants of the two verified maps lie in k[x_1..x_m]",
        witnesses=report.witnesses,
        flags=report.flags,
    )
