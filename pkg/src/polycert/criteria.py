"""Structural verdicts on presentations: factoriality, fibration,
unit groups of slice quotients, isomorphism-class invariants,
automorphism checking, and the counterexample catalog.

Positive verdicts carry witnesses that re-verify by direct recomputation
(exact division for factors, recombination for ideal membership, exact
substitution for automorphism data).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .factor import IrreducibleResult, irreducible_test
from .fields import Field
from .linalg import solve_poly_combination
from .membership import ideal_membership
from .plane import (
    PlaneAuto,
    SegreNagataParams,
    is_line,
    match_segre_nagata,
    segre_nagata,
)
from .poly import Poly, PolyError, VarContext, plane_context
from .presentation import AElem, AEndo, Presentation, PresentationError


# ---------------------------------------------------------------------------
# UFD criterion


@dataclass(frozen=True)
class UfdVerdict:
    verdict: str  # "ufd" | "not_ufd" | "unknown"
    j: int | None = None
    factor: Poly | None = None
    per_j: tuple = ()
    used_shortcut: bool = False

    @property
    def is_ufd(self):
        return self.verdict == "ufd"

    def to_json(self):
        out = {"verdict": self.verdict, "shortcut_f_only": self.used_shortcut}
        if self.j is not None:
            out["j"] = self.j
        if self.factor is not None:
            out["factor"] = str(self.factor)
        if self.per_j:
            out["per_j"] = [
                {"j": j, "status": s, "witness": str(w) if w is not None else None}
                for j, s, w in self.per_j
            ]
        return out


def slice_poly(pres: Presentation, j: int) -> Poly:
    """F_j = F with X_j set to zero (a polynomial without X_j and Y)."""
    zero = Poly.zero(pres.ctx, pres.field)
    return pres.F.substitute({f"X{j}": zero})


def _irr_or_unit(p: Poly) -> tuple:
    """("ok"|"fail"|"unknown", witness factor or None)."""
    if p.is_zero():
        raise PolyError("slice polynomial vanished; f = 0 is impossible here")
    if p.is_unit():
        return "ok", None
    res = irreducible_test(p)
    if res.is_yes:
        return "ok", None
    if res.is_no:
        return "fail", res.factor
    return "unknown", None


def ufd_check(pres: Presentation) -> UfdVerdict:
    """A is a UFD iff every slice F_j is irreducible or a unit; for
    structured presentations this reduces to f alone."""
    if pres.is_structured:
        status, witness = _irr_or_unit(pres.f)
        if status == "ok":
            return UfdVerdict("ufd", used_shortcut=True)
        if status == "fail":
            return UfdVerdict("not_ufd", j=None, factor=witness, used_shortcut=True)
        return UfdVerdict("unknown", used_shortcut=True)
    per = []
    for j in range(1, pres.m + 1):
        Fj = slice_poly(pres, j)
        status, witness = _irr_or_unit(Fj)
        per.append((j, status, witness))
        if status == "fail":
            return UfdVerdict("not_ufd", j=j, factor=witness, per_j=tuple(per))
    if any(s == "unknown" for _, s, _ in per):
        j_unknown = next(j for j, s, _ in per if s == "unknown")
        return UfdVerdict("unknown", j=j_unknown, per_j=tuple(per))
    return UfdVerdict("ufd", per_j=tuple(per))


# ---------------------------------------------------------------------------
# fibration criterion


@dataclass(frozen=True)
class FibrationVerdict:
    verdict: str  # "fibration" | "not_fibration" | "unknown"
    line_source: str | None = None
    witness: Poly | None = None
    flags: tuple = ()

    def to_json(self):
        out = {"verdict": self.verdict, "flags": list(self.flags)}
        if self.line_source:
            out["line_source"] = self.line_source
        if self.witness is not None:
            out["witness"] = str(self.witness)
        return out


def fibration_check(pres: Presentation) -> FibrationVerdict:
    """Plane-fibration criterion for structured presentations: the fibers
    over k[x_1..x_m] are planes exactly when f is a line.  The structured
    form also makes A a flat k[x]-algebra, recorded as a flag."""
    if not pres.is_structured:
        raise PresentationError(
            "fibration criterion needs the structured form F = f + X1..Xm*g"
        )
    flags = ["flat over k[x_1..x_m] (structured presentation)"]
    line = is_line(pres.f)
    if line.is_line:
        if line.source == "segre-nagata":
            flags.append(
                "f is a non-trivial line: A is stably a polynomial ring "
                "but not one itself"
            )
        return FibrationVerdict(
            "fibration", line_source=line.source, flags=tuple(flags)
        )
    if line.verdict == "not_line":
        return FibrationVerdict(
            "not_fibration", witness=line.witness, flags=tuple(flags)
        )
    return FibrationVerdict("unknown", flags=tuple(flags) + tuple(line.flags))


# ---------------------------------------------------------------------------
# unit group of A / x_i A


@dataclass(frozen=True)
class UnitQuotientVerdict:
    verdict: str  # "units_are_constants" | "units_larger" | "unknown"
    detail: str
    witness: Poly | None = None

    def to_json(self):
        out = {"verdict": self.verdict, "detail": self.detail}
        if self.witness is not None:
            out["witness"] = str(self.witness)
        return out


def _univariate_gcd(a: Poly, b: Poly, var: str) -> Poly:
    """Monic gcd of univariate (in var) polynomials."""
    f = a.field
    ca, cb = a.univariate_in(var), b.univariate_in(var)

    def rem(u, v):
        u = list(u)
        while u and len(u) >= len(v):
            c = f.div(u[-1], v[-1])
            k = len(u) - len(v)
            for i, vi in enumerate(v):
                u[k + i] = f.sub(u[k + i], f.mul(c, vi))
            while u and not u[-1]:
                u.pop()
        return u

    while cb:
        ca, cb = cb, rem(ca, cb)
    if ca:
        inv = f.inv(ca[-1])
        ca = [f.mul(c, inv) for c in ca]
    terms = {}
    i = a.ctx.index[var]
    for j, c in enumerate(ca):
        if c:
            e = [0] * len(a.ctx)
            e[i] = j
            terms[tuple(e)] = c
    return Poly(a.ctx, f, terms)


def unit_quotient_check(pres: Presentation, i: int) -> UnitQuotientVerdict:
    """Decide whether (A / x_i A)* collapses to the constants.

    Structured presentations only; A/x_iA is a polynomial extension of
    k[Z,T]/(f).  Implemented class: f = a0(Z) + a1(Z)*T.  For a1 = 0 the
    units are constants iff a0 is linear; for a1 != 0 with gcd(a0,a1)=1
    the quotient is k[Z][1/a1][Y...], whose units exceed the constants
    unless a1 is a constant.
    """
    if not (1 <= i <= pres.m):
        raise PresentationError(f"index {i} out of range 1..{pres.m}")
    if not pres.is_structured:
        raise PresentationError("unit-quotient criterion needs the structured form")
    f = pres.f
    plane = plane_context()
    fp = f.rename_context(plane)
    if fp.degree_in("T") > 1:
        irr = irreducible_test(fp)
        if not irr.is_yes:
            return UnitQuotientVerdict(
                "unknown", "deg_T f >= 2 and irreducibility unresolved"
            )
        return UnitQuotientVerdict(
            "unknown", "deg_T f >= 2: outside the implemented unit analysis"
        )
    coeffs = fp.coefficients_in("T")
    a0 = coeffs.get(0, Poly.zero(plane, pres.field))
    a1 = coeffs.get(1, Poly.zero(plane, pres.field))
    if a1.is_zero():
        # quotient is (k[Z]/(a0))[Y, T, other x's]
        if a0.is_unit():
            return UnitQuotientVerdict(
                "units_larger", "f is a unit: the quotient ring is zero or trivial"
            )
        if a0.total_degree() == 1:
            return UnitQuotientVerdict(
                "units_are_constants", "f = a0(Z) linear: quotient is a polynomial ring"
            )
        irr = irreducible_test(a0)
        if irr.is_yes:
            return UnitQuotientVerdict(
                "units_larger",
                "a0 irreducible of degree >= 2: residue field extension adds units",
            )
        if irr.is_no:
            return UnitQuotientVerdict(
                "unknown",
                "a0 reducible: quotient not a domain, unit analysis out of class",
                witness=irr.factor,
            )
        return UnitQuotientVerdict("unknown", "a0 irreducibility unresolved")
    gcd = _univariate_gcd(a0, a1, "Z") if not a0.is_zero() else a1
    if not gcd.is_constant() and not a0.is_zero():
        return UnitQuotientVerdict(
            "unknown",
            "gcd(a0, a1) nontrivial: f reducible, outside the implemented class",
            witness=gcd,
        )
    if a1.is_constant():
        return UnitQuotientVerdict(
            "units_are_constants",
            "f = a0(Z) + a1*T with constant a1: quotient is a polynomial ring",
        )
    return UnitQuotientVerdict(
        "units_larger",
        "a1(Z) becomes a unit in the quotient k[Z][1/a1]",
        witness=a1,
    )


@dataclass(frozen=True)
class LinearInT:
    direct: bool
    a0: Poly | None = None
    a1: Poly | None = None

    def to_json(self):
        if not self.direct:
            return {"verdict": "no-direct"}
        return {"verdict": "yes", "a0": str(self.a0), "a1": str(self.a1)}


def linear_in_t_detect(f: Poly) -> LinearInT:
    """Read off f = a0(Z) + a1(Z)*T in the given coordinates, if so shaped.

    No search over coordinate changes is attempted.
    """
    if f.is_zero():
        raise PolyError("zero input")
    plane = plane_context()
    if f.ctx != plane:
        f = f.rename_context(plane)
    if f.degree_in("T") > 1:
        return LinearInT(False)
    coeffs = f.coefficients_in("T")
    zero = Poly.zero(plane, f.field)
    return LinearInT(True, a0=coeffs.get(0, zero), a1=coeffs.get(1, zero))


# ---------------------------------------------------------------------------
# isomorphism invariants


_FINITE_FIELD_FLAG = (
    "finite ground field: infinite-field hypotheses are unmet; "
    "necessary-condition reporting only"
)
_DK_HYPOTHESIS_FLAG = (
    "rigidity hypothesis (invariant subring equals k[x,z,t]) assumed, "
    "not certified for this input"
)


@dataclass(frozen=True)
class IsoInvariantReport:
    verdict: str  # "not_isomorphic" | "consistent_with" | "isomorphic"
    r_multiset_equal: bool
    alpha: PlaneAuto | None = None
    lam: object = None
    certified_lines: bool = False
    flags: tuple = ()
    detail: str = ""

    def to_json(self):
        out = {
            "verdict": self.verdict,
            "r_multiset_equal": self.r_multiset_equal,
            "certified_nontrivial_lines": self.certified_lines,
            "flags": list(self.flags),
            "detail": self.detail,
        }
        if self.alpha is not None:
            out["alpha"] = self.alpha.to_json()
        if self.lam is not None:
            out["lambda"] = str(self.lam)
        return out


def _scalar_ratio(p: Poly, q: Poly):
    """lam with p == lam*q exactly, or None."""
    if p.is_zero() or q.is_zero():
        return None
    if set(p.terms) != set(q.terms):
        return None
    f = p.field
    lam = None
    for e, c in p.terms.items():
        ratio = f.div(c, q.terms[e])
        if lam is None:
            lam = ratio
        elif lam != ratio:
            return None
    return lam


def iso_invariants(
    p1: Presentation,
    p2: Presentation,
    candidate_alpha: PlaneAuto | None = None,
) -> IsoInvariantReport:
    """Necessary-condition comparison of two presentations, with the full
    iff granted only when both f's are certified non-trivial lines.

    With a candidate plane automorphism alpha, verifies alpha(f2) = lam*f1
    for a unit lam by exact substitution and scalar extraction.
    """
    if p1.field != p2.field:
        raise PresentationError("field mismatch")
    if p1.m != p2.m:
        return IsoInvariantReport(
            "not_isomorphic",
            r_multiset_equal=False,
            detail="different numbers of monomial variables",
            flags=(_DK_HYPOTHESIS_FLAG,),
        )
    multiset_equal = sorted(p1.r) == sorted(p2.r)
    sn1 = match_segre_nagata(p1.f)
    sn2 = match_segre_nagata(p2.f)
    certified = sn1 is not None and sn2 is not None
    flags = ()
    if not certified:
        flags = (_DK_HYPOTHESIS_FLAG,)
        if p1.field.char > 0:
            flags = flags + (_FINITE_FIELD_FLAG,)

    lam = None
    alpha_ok = False
    if candidate_alpha is not None:
        plane = plane_context()
        image = candidate_alpha.apply(p2.f.rename_context(plane))
        lam = _scalar_ratio(image, p1.f.rename_context(plane))
        alpha_ok = lam is not None
    elif p1.f == p2.f:
        candidate_alpha = PlaneAuto.identity(p1.field)
        lam = p1.field.one
        alpha_ok = True

    if not multiset_equal:
        return IsoInvariantReport(
            "not_isomorphic",
            r_multiset_equal=False,
            certified_lines=certified,
            flags=flags,
            detail="exponent multisets differ, an isomorphism invariant",
        )
    if alpha_ok and certified:
        return IsoInvariantReport(
            "isomorphic",
            r_multiset_equal=True,
            alpha=candidate_alpha,
            lam=lam,
            certified_lines=True,
            detail="multisets match and alpha carries f2 to a scalar multiple of f1",
        )
    if alpha_ok:
        return IsoInvariantReport(
            "consistent_with",
            r_multiset_equal=True,
            alpha=candidate_alpha,
            lam=lam,
            certified_lines=False,
            flags=flags,
            detail="necessary conditions hold; lines not certified, so no full iff",
        )
    return IsoInvariantReport(
        "consistent_with",
        r_multiset_equal=True,
        certified_lines=certified,
        flags=flags,
        detail="multisets match; no plane automorphism was supplied or verified",
    )


# ---------------------------------------------------------------------------
# automorphism checking


@dataclass(frozen=True)
class AutCheckReport:
    verdict: str  # "automorphism" | "not_automorphism" | "inconclusive"
    cond_a: bool | None
    cond_c: bool | None
    reason: str = ""
    preimages: dict = dc_field(default_factory=dict)

    def to_json(self):
        return {
            "verdict": self.verdict,
            "cond_a_restricts_invertibly": self.cond_a,
            "cond_c_ideal_preserved": self.cond_c,
            "reason": self.reason,
            "preimages": {k: str(v) for k, v in self.preimages.items()},
        }


def _monomials_up_to(ctx: VarContext, names: list, degree: int):
    """Exponent dictionaries for all monomials in names of total degree <= degree."""
    out = [{}]
    for d in range(1, degree + 1):
        stack = [({}, 0, d)]
        while stack:
            exps, idx, rem = stack.pop()
            if idx == len(names) - 1:
                e = dict(exps)
                if rem:
                    e[names[idx]] = rem
                out.append(e)
                continue
            for k in range(rem + 1):
                e = dict(exps)
                if k:
                    e[names[idx]] = k
                stack.append((e, idx + 1, rem - k))
    return out


def _solve_preimage(target: Poly, images: dict, names: list, cap: int):
    """Find a polynomial N in `names` with N(images) == target, degree-bounded."""
    ctx, field = target.ctx, target.field
    for degree in range(1, cap + 1):
        monos = _monomials_up_to(ctx, names, degree)
        basis = []
        for exps in monos:
            b = Poly.const(ctx, field, field.one)
            for name, k in exps.items():
                b = b * images[name] ** k
            basis.append(b)
        sol = solve_poly_combination(target, basis)
        if sol is not None:
            expr = Poly.zero(ctx, field)
            for coeff, exps in zip(sol, monos):
                if coeff:
                    mono = Poly.const(ctx, field, coeff)
                    for name, k in exps.items():
                        mono = mono * Poly.var(ctx, field, name) ** k
                    expr = expr + mono
            return expr
        if len(monos) > 3000:
            break
    return None


def _linear_part_invertible(images: dict, names: list, field: Field) -> bool:
    """Determinant of the degree-1 coefficient matrix of the images."""
    n = len(names)
    rows = []
    for name in names:
        img = images[name]
        rows.append([img.coeff_of({v: 1}) for v in names])
    # Gaussian determinant
    mat = [row[:] for row in rows]
    det = field.one
    for col in range(n):
        piv = None
        for i in range(col, n):
            if mat[i][col]:
                piv = i
                break
        if piv is None:
            return False
        if piv != col:
            mat[col], mat[piv] = mat[piv], mat[col]
            det = field.neg(det)
        det = field.mul(det, mat[col][col])
        inv = field.inv(mat[col][col])
        for i in range(col + 1, n):
            if mat[i][col]:
                factor = field.mul(mat[i][col], inv)
                mat[i] = [
                    field.sub(x, field.mul(factor, y)) for x, y in zip(mat[i], mat[col])
                ]
    return bool(det)


def aut_check(pres: Presentation, phi: AEndo, degree_cap: int | None = None) -> AutCheckReport:
    """Automorphism test for a relation-checked endomorphism.

    cond_a: the images of x_1..x_m, z, t stay inside k[x, z, t] and the
    induced endomorphisms of k[x] and k[x, z, t] are invertible, witnessed
    by explicit degree-bounded preimages of the generators.  cond_c: the
    slice ideal (X^r, F) is carried onto itself, checked by two-sided
    membership with exact cofactors.  Together these certify invertibility
    on all of A; a failed linear part refutes cond_a outright.
    """
    if not phi.relation_checked:
        raise PresentationError("endomorphism must be relation-checked first")
    field = pres.field
    ctx = pres.ctx
    b_names = pres.x_names() + ["Z", "T"]

    # images must avoid Y
    for name in b_names:
        if phi.images[name].rep.degree_in("Y"):
            return AutCheckReport(
                "not_automorphism",
                cond_a=False,
                cond_c=None,
                reason=f"image of {name} leaves k[x, z, t]",
            )
    b_images = {name: phi.images[name].rep for name in b_names}
    e_images = {name: phi.images[name].rep for name in pres.x_names()}
    for name in pres.x_names():
        for v in e_images[name].variables_present():
            if v not in pres.x_names():
                return AutCheckReport(
                    "not_automorphism",
                    cond_a=False,
                    cond_c=None,
                    reason=f"image of {name} leaves k[x_1..x_m]",
                )

    if degree_cap is None:
        img_deg = max(
            (p.total_degree() for p in b_images.values() if not p.is_constant()),
            default=1,
        )
        degree_cap = img_deg * img_deg + 4

    if not _linear_part_invertible(b_images, b_names, field):
        return AutCheckReport(
            "not_automorphism",
            cond_a=False,
            cond_c=None,
            reason="linear part of the restricted endomorphism is singular; "
            "no polynomial inverse can exist",
        )

    preimages = {}
    for name in b_names:
        target = Poly.var(ctx, field, name)
        search_names = pres.x_names() if name in pres.x_names() else b_names
        expr = _solve_preimage(target, b_images, search_names, degree_cap)
        if expr is None:
            return AutCheckReport(
                "inconclusive",
                cond_a=None,
                cond_c=None,
                reason=f"no preimage of {name} within degree cap {degree_cap}",
            )
        preimages[name] = expr
    cond_a = True

    xr = pres.x_r_monomial()
    gens_I = [xr, pres.F]
    gens_phi = [p.substitute(b_images) for p in gens_I]
    cap = max(
        degree_cap,
        2 * max(p.total_degree() for p in gens_I + gens_phi) + 4,
    )
    cond_c = True
    for target, gens in (
        (gens_phi[0], gens_I),
        (gens_phi[1], gens_I),
        (gens_I[0], gens_phi),
        (gens_I[1], gens_phi),
    ):
        res = ideal_membership(target, gens, cap)
        if res.verdict == "inconclusive":
            return AutCheckReport(
                "inconclusive",
                cond_a=cond_a,
                cond_c=None,
                reason="ideal membership hit the degree cap",
                preimages=preimages,
            )
        if res.verdict == "not_in":
            cond_c = False
            break
    if not cond_c:
        return AutCheckReport(
            "not_automorphism",
            cond_a=cond_a,
            cond_c=False,
            reason="slice ideal is not preserved",
            preimages=preimages,
        )
    return AutCheckReport(
        "automorphism", cond_a=True, cond_c=True, preimages=preimages
    )


# ---------------------------------------------------------------------------
# counterexample catalog


@dataclass(frozen=True)
class CatalogEntry:
    r: tuple
    f: Poly
    field: Field
    presentation: Presentation
    annotations: tuple

    def to_json(self):
        return {
            "r": list(self.r),
            "f": str(self.f),
            "field": self.field.spec(),
            "annotations": list(self.annotations),
        }


@dataclass(frozen=True)
class Catalog:
    entries: tuple
    certificates: tuple  # (i, j, verdict, by)
    params: SegreNagataParams

    def to_json(self):
        return {
            "params": {"p": self.params.p, "e": self.params.e, "s": self.params.s},
            "entries": [e.to_json() for e in self.entries],
            "certificates": [
                {"pair": [i, j], "verdict": v, "by": by}
                for (i, j, v, by) in self.certificates
            ],
        }


_STABLY_TRIVIAL = (
    "stably trivial: adjoining one variable yields a polynomial ring "
    "(cited stability result; not re-verified here)"
)
_NOT_TRIVIAL = (
    "not a polynomial ring: f is a certified non-trivial line"
)


def _multisets(m: int, count: int):
    """First `count` exponent multisets (entries > 1), ordered by
    (sum, descending tuple)."""
    out = []
    total = 2 * m
    while len(out) < count:
        # all multisets with this sum
        batch = []

        def rec(prefix, remaining, slots, floor):
            if slots == 0:
                if remaining == 0:
                    batch.append(tuple(prefix))
                return
            for v in range(floor, remaining + 1):
                if remaining - v >= 2 * (slots - 1) and v >= 2:
                    rec(prefix + [v], remaining - v, slots - 1, v)

        rec([], total, m, 2)
        batch.sort(key=lambda t: tuple(sorted(t, reverse=True)))
        out.extend(batch)
        total += 1
    return out[:count]


def zcp_catalog(
    count: int, field: Field, params: SegreNagataParams, m: int = 2
) -> Catalog:
    """`count` presentations sharing one validated non-trivial line f,
    pairwise non-isomorphic by the exponent-multiset invariant."""
    if count < 2:
        raise PresentationError("catalog needs count >= 2")
    if m < 1:
        raise PresentationError("m must be positive")
    f = segre_nagata(params, field)
    entries = []
    for r in _multisets(m, count):
        pres = Presentation(m, r, _lift_plane(f, m, field), field)
        entries.append(
            CatalogEntry(
                r=r,
                f=f,
                field=field,
                presentation=pres,
                annotations=(_STABLY_TRIVIAL, _NOT_TRIVIAL),
            )
        )
    certificates = []
    for i in range(len(entries)):
        for j in range(i + 1, len(entries)):
            report = iso_invariants(entries[i].presentation, entries[j].presentation)
            if report.verdict != "not_isomorphic":
                raise PresentationError(
                    "internal: catalog entries failed pairwise separation"
                )
            certificates.append((i, j, "NotIsomorphic", "r-multiset"))
    return Catalog(tuple(entries), tuple(certificates), params)


def _lift_plane(f: Poly, m: int, field: Field) -> Poly:
    from .poly import presentation_context

    return f.rename_context(presentation_context(m))
