"""Tame automorphisms of k[Z,T] and plane-coordinate recognition.

A polynomial f is a coordinate when k[Z,T] = k[f]^[1].  The decision
procedure is greedy degree reduction: a coordinate of degree > 1 has
Newton support inside the triangle spanned by (deg_Z f, 0) and
(0, deg_T f), the two partial degrees divide one another, and the top
edge form is a perfect power of a binomial Z + lam*T^e (or T + lam*Z^e);
cancelling that edge with one elementary move strictly lowers one partial
degree.  Every Yes is re-verified by exact composition, so positive
verdicts are unconditional; a No from the elementary search is sound for
the implemented reduction class and carries an assumption flag.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .factor import irreducible_test
from .fields import Field
from .parse import parse_poly
from .poly import Poly, PolyError, plane_context, power_of_linear

_PLANE = plane_context()


class PlaneError(ValueError):
    pass


class TameMove:
    """One generator of the tame group: an affine move or an elementary
    substitution into the Z-slot (Z -> Z + q(T)) or the T-slot."""

    __slots__ = ("kind", "matrix", "shift", "q")

    AFFINE = "affine"
    ELEM_Z = "elemZ"
    ELEM_T = "elemT"

    def __init__(self, kind, matrix=None, shift=None, q=None):
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "shift", shift)
        object.__setattr__(self, "q", q)
        if kind == self.AFFINE:
            (a, b), (c, d) = matrix
            if not (a * d - b * c):
                raise PlaneError("affine move with zero determinant")
        elif kind in (self.ELEM_Z, self.ELEM_T):
            if q is None:
                raise PlaneError("elementary move needs a polynomial")
            other = "Z" if kind == self.ELEM_T else "T"
            for v in q.variables_present():
                if v != other:
                    raise PlaneError(f"elementary {kind} polynomial must be in {other}")
        else:
            raise PlaneError(f"unknown move kind {kind!r}")

    def __setattr__(self, *a):
        raise AttributeError("TameMove is immutable")

    @staticmethod
    def affine(field: Field, matrix, shift=None) -> "TameMove":
        shift = shift if shift is not None else (field.zero, field.zero)
        return TameMove(TameMove.AFFINE, matrix=tuple(map(tuple, matrix)), shift=tuple(shift))

    @staticmethod
    def elem_z(q: Poly) -> "TameMove":
        return TameMove(TameMove.ELEM_Z, q=q)

    @staticmethod
    def elem_t(q: Poly) -> "TameMove":
        return TameMove(TameMove.ELEM_T, q=q)

    def images(self, field: Field) -> tuple:
        """(P, Q): the images of (Z, T) under this move."""
        Z = Poly.var(_PLANE, field, "Z")
        T = Poly.var(_PLANE, field, "T")
        if self.kind == self.AFFINE:
            (a, b), (c, d) = self.matrix
            s1, s2 = self.shift
            P = Z.scale(a) + T.scale(b) + Poly.const(_PLANE, field, s1)
            Q = Z.scale(c) + T.scale(d) + Poly.const(_PLANE, field, s2)
            return P, Q
        if self.kind == self.ELEM_Z:
            return Z + self.q, T
        return Z, T + self.q

    def inverse(self, field: Field) -> "TameMove":
        if self.kind == self.AFFINE:
            (a, b), (c, d) = self.matrix
            s1, s2 = self.shift
            det = field.sub(field.mul(a, d), field.mul(b, c))
            inv = field.inv(det)
            ia, ib = field.mul(d, inv), field.neg(field.mul(b, inv))
            ic, id_ = field.neg(field.mul(c, inv)), field.mul(a, inv)
            ns1 = field.neg(field.add(field.mul(ia, s1), field.mul(ib, s2)))
            ns2 = field.neg(field.add(field.mul(ic, s1), field.mul(id_, s2)))
            return TameMove.affine(field, ((ia, ib), (ic, id_)), (ns1, ns2))
        return TameMove(self.kind, q=-self.q)

    def to_json(self) -> dict:
        if self.kind == self.AFFINE:
            return {
                "affine": {
                    "matrix": [[str(c) for c in row] for row in self.matrix],
                    "shift": [str(c) for c in self.shift],
                }
            }
        return {self.kind: str(self.q)}

    @staticmethod
    def from_json(data: dict, field: Field) -> "TameMove":
        if "affine" in data:
            mat = [
                [_parse_scalar(c, field) for c in row] for row in data["affine"]["matrix"]
            ]
            shift = [_parse_scalar(c, field) for c in data["affine"].get("shift", ["0", "0"])]
            return TameMove.affine(field, mat, shift)
        if "elemZ" in data:
            return TameMove.elem_z(parse_poly(data["elemZ"], _PLANE, field))
        if "elemT" in data:
            return TameMove.elem_t(parse_poly(data["elemT"], _PLANE, field))
        raise PlaneError(f"unrecognized move object {data}")


def _parse_scalar(text: str, field: Field):
    p = parse_poly(str(text), _PLANE, field)
    if not p.is_constant():
        raise PlaneError(f"expected a scalar, got {text!r}")
    return p.constant_value()


@dataclass(frozen=True)
class TameWord:
    moves: tuple

    def __iter__(self):
        return iter(self.moves)

    def __len__(self):
        return len(self.moves)

    def to_json(self) -> list:
        return [m.to_json() for m in self.moves]

    @staticmethod
    def from_json(data: list, field: Field) -> "TameWord":
        return TameWord(tuple(TameMove.from_json(d, field) for d in data))


class PlaneAuto:
    """An automorphism of k[Z,T] with a verified inverse."""

    __slots__ = ("P", "Q", "inv_P", "inv_Q", "verified")

    def __init__(self, P, Q, inv_P, inv_Q, _pre_verified: bool = False):
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "inv_P", inv_P)
        object.__setattr__(self, "inv_Q", inv_Q)
        if _pre_verified:
            object.__setattr__(self, "verified", True)
            return
        field = P.field
        Z = Poly.var(_PLANE, field, "Z")
        T = Poly.var(_PLANE, field, "T")
        ok = (
            P.substitute({"Z": inv_P, "T": inv_Q}) == Z
            and Q.substitute({"Z": inv_P, "T": inv_Q}) == T
            and inv_P.substitute({"Z": P, "T": Q}) == Z
            and inv_Q.substitute({"Z": P, "T": Q}) == T
        )
        object.__setattr__(self, "verified", ok)
        if not ok:
            raise PlaneError("inverse failed exact composition check")

    def __setattr__(self, *a):
        raise AttributeError("PlaneAuto is immutable")

    def apply(self, f: Poly) -> Poly:
        return f.substitute({"Z": self.P, "T": self.Q})

    def apply_inverse(self, f: Poly) -> Poly:
        return f.substitute({"Z": self.inv_P, "T": self.inv_Q})

    def inverse(self) -> "PlaneAuto":
        return PlaneAuto(self.inv_P, self.inv_Q, self.P, self.Q)

    @staticmethod
    def identity(field: Field) -> "PlaneAuto":
        Z = Poly.var(_PLANE, field, "Z")
        T = Poly.var(_PLANE, field, "T")
        return PlaneAuto(Z, T, Z, T)

    def to_json(self) -> dict:
        return {
            "Z": str(self.P),
            "T": str(self.Q),
            "invZ": str(self.inv_P),
            "invT": str(self.inv_Q),
        }


def chain_apply(f: Poly, moves, field: Field) -> Poly:
    """Substitute each move into f in order.  Equals applying the composed
    automorphism, but intermediates never exceed the partial compositions,
    which keeps telescoping products cheap."""
    for mv in moves:
        mp, mq = mv.images(field)
        f = f.substitute({"Z": mp, "T": mq})
    return f


def word_to_auto(word: TameWord, field: Field) -> PlaneAuto:
    """Compose a word into a verified automorphism.

    The word acts by iterated substitution: applying the resulting auto to
    f equals substituting the moves into f left to right.  The inverse is
    the reversed word of inverted moves; both composition identities are
    verified exactly by telescoping chain evaluation.
    """
    Z = Poly.var(_PLANE, field, "Z")
    T = Poly.var(_PLANE, field, "T")
    P, Q = Z, T
    for mv in word:
        mp, mq = mv.images(field)
        P = P.substitute({"Z": mp, "T": mq})
        Q = Q.substitute({"Z": mp, "T": mq})
    inv_moves = [mv.inverse(field) for mv in reversed(word.moves)]
    iP, iQ = Z, T
    for inv in inv_moves:
        mp, mq = inv.images(field)
        iP = iP.substitute({"Z": mp, "T": mq})
        iQ = iQ.substitute({"Z": mp, "T": mq})
    # both composition orders must telescope back to the identity pair
    fwd = list(word.moves)
    for start, expect in ((Z, Z), (T, T)):
        if chain_apply(start, inv_moves + fwd, field) != expect:
            raise PlaneError("inverse failed exact composition check")
        if chain_apply(start, fwd + inv_moves, field) != expect:
            raise PlaneError("inverse failed exact composition check")
    return PlaneAuto(P, Q, iP, iQ, _pre_verified=True)


# ---------------------------------------------------------------------------
# coordinate recognition


@dataclass(frozen=True)
class CoordinateCertificate:
    verdict: str  # "yes" | "no"
    word: TameWord | None = None
    auto: PlaneAuto | None = None
    mate: Poly | None = None
    stuck: Poly | None = None
    reason: str | None = None  # TopFormNotLinearPower | NoReducingElementary
    flags: tuple = ()

    @property
    def is_coordinate(self):
        return self.verdict == "yes"

    def to_json(self) -> dict:
        if self.verdict == "yes":
            return {
                "verdict": "coordinate",
                "word": self.word.to_json(),
                "auto": self.auto.to_json(),
                "mate": str(self.mate),
                "flags": list(self.flags),
            }
        return {
            "verdict": "not-coordinate",
            "reason": self.reason,
            "stuck": str(self.stuck),
            "flags": list(self.flags),
        }


def _p_split(d: int, char: int) -> tuple:
    e = 0
    while char and d % char == 0:
        d //= char
        e += 1
    return e, d


def _edge_binomial(u: Poly, main: str, other: str, mult: int, e: int):
    """Recover lam with u == c*(main + lam*other^e)**mult, or None."""
    f = u.field
    c = u.coeff_of({main: mult})
    if not c:
        return None
    eps, m0 = _p_split(mult, f.char)
    q = f.char**eps if eps else 1
    num = u.coeff_of({main: mult - q, other: e * q})
    lam = f.div(num, f.mul(c, f.of_int(m0)))
    cand = (
        Poly.var(u.ctx, f, main) + (Poly.var(u.ctx, f, other) ** e).scale(lam)
    ) ** mult
    if cand.scale(c) == u:
        return c, lam
    return None


_ELEMENTARY_FLAG = (
    "no-reducing-elementary: search assumes deg q <= deg f for the reducing move"
)


def coordinate_decide(f: Poly, degree_bound: int | None = None) -> CoordinateCertificate:
    """Decide k[Z,T] = k[f]^[1] with a tame word witness.

    Yes certificates re-verify by exact composition before return.  No
    certificates carry the stuck polynomial and the failing step.
    """
    if f.ctx != _PLANE:
        f = f.rename_context(_PLANE)
    if f.is_zero() or f.is_constant():
        raise PolyError("coordinate_decide needs a nonconstant input")
    field = f.field
    Z = Poly.var(_PLANE, field, "Z")
    T = Poly.var(_PLANE, field, "T")

    moves = []
    g = f
    cap = degree_bound if degree_bound is not None else g.total_degree() * 2 + 16
    for _ in range(cap):
        d = g.total_degree()
        if d == 0:
            raise PlaneError("internal: reduction produced a constant")
        if d == 1:
            a = g.coeff_of({"Z": 1})
            b = g.coeff_of({"T": 1})
            c0 = g.constant_value()
            if a:
                inv = field.inv(a)
                mat = ((inv, field.neg(field.mul(b, inv))), (field.zero, field.one))
                shift = (field.neg(field.mul(c0, inv)), field.zero)
            else:
                inv = field.inv(b)
                mat = ((field.zero, field.one), (inv, field.zero))
                shift = (field.zero, field.neg(field.mul(c0, inv)))
            mv = TameMove.affine(field, mat, shift)
            mp, mq = mv.images(field)
            g = g.substitute({"Z": mp, "T": mq})
            moves.append(mv)
            if g != Z:
                raise PlaneError("internal: affine completion failed")
            word = TameWord(tuple(moves))
            auto = word_to_auto(word, field)
            if chain_apply(f, word.moves, field) != Z:
                raise PlaneError("internal: certificate failed re-verification")
            if auto.inv_P != f:
                raise PlaneError("internal: inverse first component mismatch")
            return CoordinateCertificate(
                "yes", word=word, auto=auto, mate=auto.inv_Q
            )
        _, top = g.top_form({"Z": 1, "T": 1})
        if power_of_linear(top) is None:
            return CoordinateCertificate(
                "no", stuck=g, reason="TopFormNotLinearPower"
            )
        mz = g.degree_in("Z")
        nt = g.degree_in("T")
        if mz == 0 or nt == 0:
            return CoordinateCertificate(
                "no",
                stuck=g,
                reason="NoReducingElementary",
                flags=(_ELEMENTARY_FLAG,),
            )
        if nt >= mz:
            if nt % mz:
                return CoordinateCertificate(
                    "no",
                    stuck=g,
                    reason="NoReducingElementary",
                    flags=(_ELEMENTARY_FLAG,),
                )
            e = nt // mz
            w, u = g.top_form({"Z": e, "T": 1})
            rec = _edge_binomial(u, "Z", "T", mz, e) if w == nt else None
            if rec is None:
                return CoordinateCertificate(
                    "no",
                    stuck=g,
                    reason="NoReducingElementary",
                    flags=(_ELEMENTARY_FLAG,),
                )
            _, lam = rec
            q = (T**e).scale(field.neg(lam))
            mv = TameMove.elem_z(q)
        else:
            if mz % nt:
                return CoordinateCertificate(
                    "no",
                    stuck=g,
                    reason="NoReducingElementary",
                    flags=(_ELEMENTARY_FLAG,),
                )
            e = mz // nt
            w, u = g.top_form({"Z": 1, "T": e})
            rec = _edge_binomial(u, "T", "Z", nt, e) if w == mz else None
            if rec is None:
                return CoordinateCertificate(
                    "no",
                    stuck=g,
                    reason="NoReducingElementary",
                    flags=(_ELEMENTARY_FLAG,),
                )
            _, lam = rec
            q = (Z**e).scale(field.neg(lam))
            mv = TameMove.elem_t(q)
        mp, mq = mv.images(field)
        g = g.substitute({"Z": mp, "T": mq})
        moves.append(mv)
    return CoordinateCertificate(
        "no",
        stuck=g,
        reason="NoReducingElementary",
        flags=(_ELEMENTARY_FLAG, "iteration-cap-reached"),
    )


# ---------------------------------------------------------------------------
# Segre-Nagata family and line checking


@dataclass(frozen=True)
class SegreNagataParams:
    p: int
    e: int
    s: int

    def validate(self):
        from .fields import _is_prime

        if not _is_prime(self.p):
            raise PlaneError(f"p={self.p} is not prime")
        if self.e < 1 or self.s < 1:
            raise PlaneError("e and s must be positive")
        pe = self.p**self.e
        sp = self.s * self.p
        if sp % pe == 0:
            raise PlaneError(f"divisibility violated: {pe} divides {sp}")
        if pe % sp == 0:
            raise PlaneError(f"divisibility violated: {sp} divides {pe}")


def segre_nagata(params: SegreNagataParams, field: Field) -> Poly:
    """The certified non-trivial line Z^(p^e) + T + T^(s*p) over F_p."""
    params.validate()
    if field.char != params.p:
        raise PlaneError(
            f"field {field.spec()} does not match characteristic {params.p}"
        )
    Z = Poly.var(_PLANE, field, "Z")
    T = Poly.var(_PLANE, field, "T")
    return Z ** (params.p**params.e) + T + T ** (params.s * params.p)


def match_segre_nagata(f: Poly) -> SegreNagataParams | None:
    """Recognize a validated Segre-Nagata instance, exactly."""
    p = f.field.char
    if p == 0:
        return None
    if f.ctx != _PLANE:
        try:
            f = f.rename_context(_PLANE)
        except Exception:
            return None
    one = f.field.one
    zs = [e for e in f.terms if e[0] and not e[1]]
    ts = [e for e in f.terms if e[1] and not e[0]]
    if len(f.terms) != 3 or len(zs) != 1 or len(ts) != 2:
        return None
    if any(c != one for c in f.terms.values()):
        return None
    zdeg = zs[0][0]
    tdegs = sorted(e[1] for e in ts)
    if tdegs[0] != 1:
        return None
    e = 0
    n = zdeg
    while n % p == 0:
        n //= p
        e += 1
    if n != 1 or e < 1:
        return None
    if tdegs[1] % p:
        return None
    s = tdegs[1] // p
    params = SegreNagataParams(p, e, s)
    try:
        params.validate()
    except PlaneError:
        return None
    return params


@dataclass(frozen=True)
class LineVerdict:
    verdict: str  # "line" | "not_line" | "unknown"
    source: str | None = None  # "coordinate" | "segre-nagata"
    witness: Poly | None = None
    certificate: object = None
    flags: tuple = ()

    @property
    def is_line(self):
        return self.verdict == "line"


def is_line(f: Poly) -> LineVerdict:
    """Line / NotLine(witness) / Unknown, every verdict unconditionally sound."""
    if f.ctx != _PLANE:
        f = f.rename_context(_PLANE)
    if f.is_zero() or f.is_constant():
        raise PolyError("is_line needs a nonconstant input")
    cert = coordinate_decide(f)
    if cert.is_coordinate:
        return LineVerdict("line", source="coordinate", certificate=cert)
    sn = match_segre_nagata(f)
    if sn is not None:
        return LineVerdict(
            "line",
            source="segre-nagata",
            certificate=sn,
            flags=("certified by family membership, not recomputed",),
        )
    irr = irreducible_test(f)
    if irr.is_no:
        return LineVerdict("not_line", witness=irr.factor)
    if f.field.char == 0 and cert.reason == "TopFormNotLinearPower" and irr.is_yes:
        return LineVerdict(
            "not_line",
            certificate=cert,
            flags=("characteristic zero: lines are coordinates",),
        )
    return LineVerdict("unknown", certificate=cert, flags=cert.flags)


# ---------------------------------------------------------------------------
# fuzz harness


def random_tame_word(
    seed: int,
    max_moves: int,
    coeff_pool: tuple = (-2, -1, 0, 1, 2),
    degree_cap: int = 4,
    field: Field | None = None,
    size_budget: int = 40,
) -> TameWord:
    """Reproducible random word; the composed first component is a
    coordinate by construction.  Moves whose composition would exceed the
    size budget are resampled, so fuzzing stays fast."""
    from .fields import QQ

    field = field or QQ
    rng = random.Random(seed)
    Z = Poly.var(_PLANE, field, "Z")
    T = Poly.var(_PLANE, field, "T")

    def pool():
        return field.of_int(rng.choice(coeff_pool))

    def nonzero_pool():
        c = pool()
        while not c:
            c = pool()
        return c

    def random_move() -> TameMove:
        kind = rng.choice(("affine", "elemZ", "elemT"))
        if kind == "affine":
            while True:
                a, b, c, d = (pool() for _ in range(4))
                if field.sub(field.mul(a, d), field.mul(b, c)):
                    break
            return TameMove.affine(field, ((a, b), (c, d)), (pool(), pool()))
        deg = rng.randint(1, degree_cap)
        var = T if kind == "elemZ" else Z
        q = (var**deg).scale(nonzero_pool())
        for j in range(1, deg):
            if rng.random() < 0.35:
                q = q + (var**j).scale(nonzero_pool())
        return TameMove.elem_z(q) if kind == "elemZ" else TameMove.elem_t(q)

    moves: list = []
    P, Q = Z, T
    degree_product = 1
    n_moves = rng.randint(0, max_moves)
    attempts = 0
    while len(moves) < n_moves and attempts < 8 * max_moves + 8:
        attempts += 1
        mv = random_move()
        # the degree product bounds every partial composition, in either
        # order and direction, so words stay cheap to verify and reduce
        mv_deg = 1 if mv.kind == TameMove.AFFINE else mv.q.total_degree()
        if degree_product * max(1, mv_deg) > size_budget:
            continue
        mp, mq = mv.images(field)
        nP = P.substitute({"Z": mp, "T": mq})
        nQ = Q.substitute({"Z": mp, "T": mq})
        if len(nP.terms) + len(nQ.terms) > 30 * size_budget:
            continue
        P, Q = nP, nQ
        degree_product *= max(1, mv_deg)
        moves.append(mv)
    return TameWord(tuple(moves))
