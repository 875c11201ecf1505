"""Sparse multivariate polynomials with exact coefficients.

A Poly is a map from exponent vectors to nonzero field elements, over a
fixed ordered variable context.  Values are immutable after construction
and every operation returns a fresh Poly, so sharing across threads is
safe.  Term order everywhere is graded lexicographic in the context's
variable order.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .fields import Field, QQ


class ContextError(ValueError):
    pass


class PolyError(ValueError):
    pass


class NotDivisible(Exception):
    """Raised by exact_divide when the quotient does not exist."""


class VarContext:
    """An ordered tuple of distinct variable names."""

    __slots__ = ("names", "index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ContextError(f"duplicate variable names in {names}")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "index", {v: i for i, v in enumerate(names)})

    def __setattr__(self, *a):
        raise AttributeError("VarContext is immutable")

    def __len__(self):
        return len(self.names)

    def __contains__(self, name: str):
        return name in self.index

    def __eq__(self, other):
        return isinstance(other, VarContext) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"VarContext{self.names}"

    def extend(self, *extra: str) -> "VarContext":
        return VarContext(self.names + tuple(extra))

    def restrict(self, keep: Iterable[str]) -> "VarContext":
        keep = set(keep)
        return VarContext(tuple(v for v in self.names if v in keep))


def presentation_context(m: int) -> VarContext:
    return VarContext([f"X{i}" for i in range(1, m + 1)] + ["Y", "Z", "T"])


def plane_context() -> VarContext:
    return VarContext(["Z", "T"])


def _grlex_key(exp: tuple) -> tuple:
    return (sum(exp), exp)


class Poly:
    """Sparse polynomial; terms maps exponent tuples to nonzero coefficients."""

    __slots__ = ("ctx", "field", "terms")

    def __init__(self, ctx: VarContext, field: Field, terms: Mapping[tuple, object]):
        clean = {e: c for e, c in terms.items() if c}
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *a):
        raise AttributeError("Poly is immutable")

    # -- constructors ----------------------------------------------------

    @staticmethod
    def zero(ctx: VarContext, field: Field) -> "Poly":
        return Poly(ctx, field, {})

    @staticmethod
    def const(ctx: VarContext, field: Field, value) -> "Poly":
        return Poly(ctx, field, {(0,) * len(ctx): value})

    @staticmethod
    def from_int(ctx: VarContext, field: Field, n: int) -> "Poly":
        return Poly.const(ctx, field, field.of_int(n))

    @staticmethod
    def var(ctx: VarContext, field: Field, name: str, power: int = 1) -> "Poly":
        if name not in ctx:
            raise ContextError(f"unknown variable {name!r} in {ctx}")
        e = [0] * len(ctx)
        e[ctx.index[name]] = power
        return Poly(ctx, field, {tuple(e): field.one})

    @staticmethod
    def monomial(ctx: VarContext, field: Field, exps: Mapping[str, int], coeff=None) -> "Poly":
        e = [0] * len(ctx)
        for v, k in exps.items():
            if v not in ctx:
                raise ContextError(f"unknown variable {v!r} in {ctx}")
            e[ctx.index[v]] = k
        return Poly(ctx, field, {tuple(e): field.one if coeff is None else coeff})

    # -- basic queries ---------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def is_unit(self) -> bool:
        return self.is_constant() and not self.is_zero()

    def constant_value(self):
        """Coefficient of the constant monomial (zero element if absent)."""
        return self.terms.get((0,) * len(self.ctx), self.field.zero)

    def total_degree(self) -> int:
        if not self.terms:
            raise PolyError("zero polynomial has no degree")
        return max(sum(e) for e in self.terms)

    def degree_in(self, name: str) -> int:
        """Degree in one variable; 0 for the zero polynomial by convention."""
        i = self.ctx.index[name]
        return max((e[i] for e in self.terms), default=0)

    def variables_present(self) -> tuple:
        present = [False] * len(self.ctx)
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    present[i] = True
        return tuple(v for i, v in enumerate(self.ctx.names) if present[i])

    def coeff_of(self, exps: Mapping[str, int]):
        e = [0] * len(self.ctx)
        for v, k in exps.items():
            e[self.ctx.index[v]] = k
        return self.terms.get(tuple(e), self.field.zero)

    def lead_term(self) -> tuple:
        """(exponent, coeff) of the graded-lex leading term."""
        if not self.terms:
            raise PolyError("zero polynomial has no lead term")
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    # -- ring operations --------------------------------------------------

    def _check(self, other: "Poly"):
        if self.ctx != other.ctx or self.field != other.field:
            raise ContextError("context or field mismatch")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        f = self.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = f.add(out.get(e, f.zero), c)
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Poly(self.ctx, f, out)

    def __neg__(self) -> "Poly":
        f = self.field
        return Poly(self.ctx, f, {e: f.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        f = self.field
        if len(self.terms) > len(other.terms):
            a, b = other, self
        else:
            a, b = self, other
        out: dict = {}
        get = out.get
        p = f.p
        nvars = len(self.ctx)
        if p is None:
            for e1, c1 in a.terms.items():
                for e2, c2 in b.terms.items():
                    if nvars == 2:
                        e = (e1[0] + e2[0], e1[1] + e2[1])
                    else:
                        e = tuple(map(int.__add__, e1, e2))
                    prev = get(e)
                    s = c1 * c2 if prev is None else prev + c1 * c2
                    if s:
                        out[e] = s
                    elif prev is not None:
                        del out[e]
        else:
            for e1, c1 in a.terms.items():
                for e2, c2 in b.terms.items():
                    if nvars == 2:
                        e = (e1[0] + e2[0], e1[1] + e2[1])
                    else:
                        e = tuple(map(int.__add__, e1, e2))
                    prev = get(e)
                    s = c1 * c2 % p if prev is None else (prev + c1 * c2) % p
                    if s:
                        out[e] = s
                    elif prev is not None:
                        del out[e]
        return Poly(self.ctx, f, out)

    def scale(self, c) -> "Poly":
        f = self.field
        if not c:
            return Poly.zero(self.ctx, f)
        return Poly(self.ctx, f, {e: f.mul(k, c) for e, k in self.terms.items()})

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise PolyError("negative power of a polynomial")
        result = Poly.const(self.ctx, self.field, self.field.one)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and self.ctx == other.ctx
            and self.field == other.field
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.ctx, self.field, frozenset(self.terms.items())))

    # -- substitution ------------------------------------------------------

    def substitute(self, assignment: Mapping[str, "Poly"]) -> "Poly":
        """Exact ring-homomorphism evaluation.

        Variables absent from the assignment map to themselves; all images
        must share one context and field, which becomes the result's.
        """
        if not assignment:
            return self
        images = dict(assignment)
        tgt_ctx = None
        tgt_field = None
        for img in images.values():
            if tgt_ctx is None:
                tgt_ctx, tgt_field = img.ctx, img.field
            elif img.ctx != tgt_ctx or img.field != tgt_field:
                raise ContextError("substitution images disagree on context/field")
        if tgt_ctx is None:
            return self
        if tgt_field != self.field:
            raise ContextError("substitution images in a different field")
        for name in images:
            if name not in self.ctx:
                raise ContextError(f"substituted variable {name!r} not in context")
        for v in self.ctx.names:
            if v not in images:
                if v not in tgt_ctx:
                    raise ContextError(f"variable {v!r} missing from target context")
                images[v] = Poly.var(tgt_ctx, tgt_field, v)

        f = tgt_field
        pow_cache: dict = {}

        def power(name: str, k: int) -> Poly:
            key = (name, k)
            hit = pow_cache.get(key)
            if hit is None:
                if k == 1:
                    hit = images[name]
                else:
                    half = power(name, k // 2)
                    hit = half * half
                    if k & 1:
                        hit = hit * images[name]
                pow_cache[key] = hit
            return hit

        out: dict = {}
        get = out.get
        p = f.p
        for e, c in self.terms.items():
            t = None
            for i, k in enumerate(e):
                if k:
                    pk = power(self.ctx.names[i], k)
                    t = pk if t is None else t * pk
            if t is None:
                key = (0,) * len(tgt_ctx)
                prev = get(key)
                s = c if prev is None else (prev + c if p is None else (prev + c) % p)
                if s:
                    out[key] = s
                elif prev is not None:
                    del out[key]
                continue
            if p is None:
                for e2, c2 in t.terms.items():
                    prev = get(e2)
                    s = c * c2 if prev is None else prev + c * c2
                    if s:
                        out[e2] = s
                    elif prev is not None:
                        del out[e2]
            else:
                for e2, c2 in t.terms.items():
                    prev = get(e2)
                    s = c * c2 % p if prev is None else (prev + c * c2) % p
                    if s:
                        out[e2] = s
                    elif prev is not None:
                        del out[e2]
        return Poly(tgt_ctx, f, out)

    def rename_context(self, new_ctx: VarContext, mapping: Mapping[str, str] | None = None) -> "Poly":
        """Reinterpret this Poly in new_ctx, optionally renaming variables."""
        mapping = mapping or {}
        pos = []
        for i, v in enumerate(self.ctx.names):
            w = mapping.get(v, v)
            if w not in new_ctx:
                used = any(e[i] for e in self.terms)
                if used:
                    raise ContextError(f"variable {v!r} has no home in {new_ctx}")
                pos.append(None)
            else:
                pos.append(new_ctx.index[w])
        out = {}
        for e, c in self.terms.items():
            ne = [0] * len(new_ctx)
            for i, k in enumerate(e):
                if k:
                    ne[pos[i]] = k
            out[tuple(ne)] = c
        if len(out) != len(self.terms):
            raise ContextError("renaming collapsed distinct monomials")
        return Poly(new_ctx, self.field, out)

    # -- graded structure --------------------------------------------------

    def weighted_degree(self, weights: Mapping[str, int]) -> int:
        if not self.terms:
            raise PolyError("zero polynomial has no degree")
        w = [weights.get(v, 0) for v in self.ctx.names]
        return max(sum(k * wi for k, wi in zip(e, w)) for e in self.terms)

    def top_form(self, weights: Mapping[str, int]) -> tuple:
        """(d, F_d): the sum of terms of maximal weighted degree d."""
        if not self.terms:
            raise PolyError("top form of the zero polynomial")
        w = [weights.get(v, 0) for v in self.ctx.names]
        best = None
        for e in self.terms:
            d = sum(k * wi for k, wi in zip(e, w))
            if best is None or d > best:
                best = d
        top = {
            e: c
            for e, c in self.terms.items()
            if sum(k * wi for k, wi in zip(e, w)) == best
        }
        return best, Poly(self.ctx, self.field, top)

    def homogeneous_part(self, degree: int) -> "Poly":
        return Poly(
            self.ctx, self.field, {e: c for e, c in self.terms.items() if sum(e) == degree}
        )

    # -- division ----------------------------------------------------------

    def exact_divide(self, divisor: "Poly") -> "Poly":
        """Return q with divisor*q == self, or raise NotDivisible."""
        self._check(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        f = self.field
        if self.is_zero():
            return self
        de, dc = divisor.lead_term()
        dc_inv = f.inv(dc)
        rem = dict(self.terms)
        out: dict = {}
        while rem:
            e = max(rem, key=_grlex_key)
            c = rem[e]
            qe = tuple(a - b for a, b in zip(e, de))
            if any(x < 0 for x in qe):
                raise NotDivisible()
            qc = f.mul(c, dc_inv)
            out[qe] = qc
            for e2, c2 in divisor.terms.items():
                key = tuple(a + b for a, b in zip(qe, e2))
                s = f.sub(rem.get(key, f.zero), f.mul(qc, c2))
                if s:
                    rem[key] = s
                else:
                    rem.pop(key, None)
        return Poly(self.ctx, f, out)

    def divides(self, other: "Poly") -> bool:
        try:
            other.exact_divide(self)
            return True
        except NotDivisible:
            return False

    # -- univariate views ----------------------------------------------------

    def univariate_in(self, name: str) -> list:
        """Dense coefficient list (low to high) when only `name` appears."""
        i = self.ctx.index[name]
        for e in self.terms:
            if any(k for j, k in enumerate(e) if j != i and k):
                raise PolyError(f"not univariate in {name}")
        if not self.terms:
            return []
        n = max(e[i] for e in self.terms)
        out = [self.field.zero] * (n + 1)
        for e, c in self.terms.items():
            out[e[i]] = c
        return out

    def coefficients_in(self, name: str) -> dict:
        """Map j -> coefficient Poly of name**j (in the same context)."""
        i = self.ctx.index[name]
        buckets: dict = {}
        for e, c in self.terms.items():
            j = e[i]
            re = list(e)
            re[i] = 0
            buckets.setdefault(j, {})[tuple(re)] = c
        return {j: Poly(self.ctx, self.field, t) for j, t in buckets.items()}

    # -- printing -------------------------------------------------------------

    def __str__(self):
        return poly_to_str(self)

    def __repr__(self):
        return f"Poly({poly_to_str(self)!r})"


def poly_to_str(p: Poly) -> str:
    """Canonical text form; parse(poly_to_str(p)) == p."""
    if p.is_zero():
        return "0"
    f = p.field
    pieces = []
    for e, c in p.sorted_terms():
        mono = "*".join(
            f"{v}^{k}" if k > 1 else v for v, k in zip(p.ctx.names, e) if k
        )
        negative = f.is_rationals and c < 0
        mag = -c if negative else c
        if mono and mag == f.one:
            body = mono
        elif mono:
            body = f"{mag}*{mono}"
        else:
            body = str(mag)
        pieces.append(("-" if negative else "+", body))
    sign0, body0 = pieces[0]
    out = ("-" if sign0 == "-" else "") + body0
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


class LinearForm:
    """A nonzero linear form a*Z + b*T in a two-variable slot of a context."""

    __slots__ = ("a", "b", "zvar", "tvar")

    def __init__(self, a, b, zvar: str = "Z", tvar: str = "T"):
        if not a and not b:
            raise PolyError("linear form must be nonzero")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "zvar", zvar)
        object.__setattr__(self, "tvar", tvar)

    def __setattr__(self, *a):
        raise AttributeError("LinearForm is immutable")

    def as_poly(self, ctx: VarContext, field: Field) -> Poly:
        return Poly.var(ctx, field, self.zvar).scale(self.a) + Poly.var(
            ctx, field, self.tvar
        ).scale(self.b)

    def __repr__(self):
        return f"LinearForm({self.a}*{self.zvar} + {self.b}*{self.tvar})"


def _p_power_split(d: int, p: int) -> tuple:
    """d = p**e * d0 with p not dividing d0; returns (e, d0)."""
    e = 0
    while p > 0 and d % p == 0:
        d //= p
        e += 1
    return e, d


def power_of_linear(h: Poly, zvar: str = "Z", tvar: str = "T"):
    """Decide h == c * (a*Z + b*T)**d for homogeneous h in (Z, T).

    Returns (c, LinearForm) or None.  The recovered candidate is sealed by
    exact re-expansion, so a positive answer is unconditional; a None is
    complete over Q and F_p because the candidate is forced.
    """
    if h.is_zero():
        raise PolyError("power_of_linear on zero input")
    for v in h.variables_present():
        if v not in (zvar, tvar):
            raise PolyError(f"input involves {v}, not homogeneous in ({zvar},{tvar})")
    d = h.total_degree()
    if any(sum(e) != d for e in h.terms):
        raise PolyError("input not homogeneous")
    if d < 1:
        raise PolyError("degree must be at least 1")
    f = h.field
    c_zd = h.coeff_of({zvar: d})
    if not c_zd:
        # a == 0 forced; h must be c*T^d
        c_td = h.coeff_of({tvar: d})
        if len(h.terms) == 1 and c_td:
            return c_td, LinearForm(f.zero, f.one, zvar, tvar)
        return None
    c = c_zd
    if f.is_rationals:
        e, d0 = 0, d
    else:
        e, d0 = _p_power_split(d, f.char)
    q = f.char**e if e else 1
    # coefficient of Z^(d-q) T^q equals c * d0 * b^q, and b^q == b on F_p
    num = h.coeff_of({zvar: d - q, tvar: q})
    b = f.div(num, f.mul(c, f.of_int(d0)))
    l = LinearForm(f.one, b, zvar, tvar)
    if l.as_poly(h.ctx, f) ** d == h.scale(f.inv(c)):
        return c, l
    return None
