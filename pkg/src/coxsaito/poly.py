"""Sparse multivariate polynomials with exact scalar coefficients.

A polynomial is a dict mapping exponent tuples to nonzero coefficients
(Fraction or Quad, fixed per ring).  Rings carry a variable list, an
optional quadratic discriminant d, and a weight vector used for weighted
gradings (invariant rings have weights deg p_i; coordinate rings use all
ones).  Zero is the empty dict; canonical term order is graded reverse
lexicographic.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import Quad, coerce, scalar_from_json, scalar_to_json


def grevlex_key(exp):
    """Sort key; max() of these over a support picks the grevlex leading term."""
    return (sum(exp), tuple(-e for e in reversed(exp)))


def wgrevlex_key(weights):
    """Weighted-degree-first variant for weighted rings."""

    def key(exp):
        return (sum(w * e for w, e in zip(weights, exp)), grevlex_key(exp))

    return key


class PolyRing:
    """Shared context: variable names, coefficient field, grading weights."""

    __slots__ = ("names", "d", "weights", "_mons", "_key")

    def __init__(self, names, d=None, weights=None):
        self.names = tuple(names)
        self.d = d
        self.weights = tuple(weights) if weights else (1,) * len(self.names)
        if len(self.weights) != len(self.names):
            raise ValueError("weight vector length mismatch")
        self._mons = {}
        if all(w == 1 for w in self.weights):
            self._key = grevlex_key
        else:
            self._key = wgrevlex_key(self.weights)

    @property
    def n(self):
        return len(self.names)

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.names == other.names
            and self.d == other.d
            and self.weights == other.weights
        )

    def __hash__(self):
        return hash((self.names, self.d, self.weights))

    def __repr__(self):
        field = "Q" if self.d is None else f"Q(sqrt{self.d})"
        return f"PolyRing({','.join(self.names)}; {field})"

    def term_key(self, exp):
        return self._key(exp)

    def coeff(self, c):
        return coerce(c, self.d)

    def zero(self):
        return Poly(self, {})

    def one(self):
        return self.const(1)

    def const(self, c):
        c = self.coeff(c)
        if not c:
            return Poly(self, {})
        return Poly(self, {(0,) * self.n: c})

    def gen(self, i):
        e = [0] * self.n
        e[i] = 1
        return Poly(self, {tuple(e): self.coeff(1)})

    def gens(self):
        return [self.gen(i) for i in range(self.n)]

    def from_dict(self, terms):
        out = {}
        for e, c in terms.items():
            c = self.coeff(c)
            if c:
                out[tuple(e)] = c
        return Poly(self, out)

    def linear_form(self, coeffs):
        """Sum of coeffs[i] * x_i."""
        out = {}
        for i, c in enumerate(coeffs):
            c = self.coeff(c)
            if c:
                e = [0] * self.n
                e[i] = 1
                out[tuple(e)] = c
        return Poly(self, out)

    def wdeg(self, exp):
        return sum(w * e for w, e in zip(self.weights, exp))

    def monomials(self, wdegree):
        """All exponent tuples of the given weighted degree, ordered."""
        if wdegree < 0:
            return ()
        cached = self._mons.get(wdegree)
        if cached is not None:
            return cached
        out = []
        exp = [0] * self.n

        def rec(i, rem):
            if i == self.n - 1:
                w = self.weights[i]
                if rem % w == 0:
                    exp[i] = rem // w
                    out.append(tuple(exp))
                    exp[i] = 0
                return
            w = self.weights[i]
            for e in range(rem // w + 1):
                exp[i] = e
                rec(i + 1, rem - w * e)
            exp[i] = 0

        if self.n:
            rec(0, wdegree)
        elif wdegree == 0:
            out.append(())
        out.sort(key=self._key, reverse=True)
        result = tuple(out)
        self._mons[wdegree] = result
        return result


class Poly:
    """Immutable-by-convention sparse polynomial over a PolyRing."""

    __slots__ = ("ring", "t")

    def __init__(self, ring, terms):
        self.ring = ring
        self.t = terms

    # -- arithmetic -------------------------------------------------------

    def _check(self, other):
        if self.ring != other.ring:
            raise ValueError("polynomial context mismatch")

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = self.ring.const(other)
        self._check(other)
        out = dict(self.t)
        for e, c in other.t.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {e: -c for e, c in self.t.items()})

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = self.ring.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        self._check(other)
        a, b = self.t, other.t
        if len(a) > len(b):
            a, b = b, a
        out = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                s = out.get(e)
                if s is None:
                    out[e] = c1 * c2
                else:
                    s = s + c1 * c2
                    if s:
                        out[e] = s
                    else:
                        del out[e]
        return Poly(self.ring, out)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c):
        c = self.ring.coeff(c)
        if not c:
            return self.ring.zero()
        return Poly(self.ring, {e: k * c for e, k in self.t.items()})

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative polynomial power")
        out = self.ring.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            if n > 1:
                base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.t == other.t
        return self.t == self.ring.const(other).t

    def __bool__(self):
        return bool(self.t)

    # -- structure --------------------------------------------------------

    def deg(self):
        """Total degree in the plain grading; -1 for the zero polynomial."""
        if not self.t:
            return -1
        return max(sum(e) for e in self.t)

    def wdeg(self):
        """Weighted degree; -1 for zero."""
        if not self.t:
            return -1
        wd = self.ring.wdeg
        return max(wd(e) for e in self.t)

    def whomog_degree(self):
        """Weighted degree if weighted-homogeneous, else None."""
        if not self.t:
            return None
        wd = self.ring.wdeg
        it = iter(self.t)
        d = wd(next(it))
        for e in it:
            if wd(e) != d:
                return None
        return d

    def is_constant(self):
        return not self.t or self.t.keys() == {(0,) * self.ring.n}

    def constant_value(self):
        if not self.t:
            return self.ring.coeff(0)
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return next(iter(self.t.values()))

    def coeff_of(self, exp):
        return self.t.get(tuple(exp), self.ring.coeff(0))

    def linear_coeffs(self):
        """Coefficients of the degree-one monomials x_i (the linear part)."""
        n = self.ring.n
        out = [self.ring.coeff(0)] * n
        for i in range(n):
            e = [0] * n
            e[i] = 1
            c = self.t.get(tuple(e))
            if c is not None:
                out[i] = c
        return out

    def leading(self, key=None):
        """(exponent, coefficient) of the leading term."""
        if not self.t:
            raise ValueError("zero polynomial has no leading term")
        key = key or self.ring.term_key
        e = max(self.t, key=key)
        return e, self.t[e]

    def monic(self, key=None):
        _, c = self.leading(key)
        return self.scale(1 / c) if c != 1 else self

    def primitive(self):
        """Rescale by a rational so coefficients are coprime integers (both
        components, in quadratic contexts) and the leading one is positive."""
        from math import gcd

        if not self.t:
            return self
        nums, dens = [], []
        for c in self.t.values():
            parts = (c.a, c.b) if isinstance(c, Quad) else (c,)
            for q in parts:
                if q:
                    nums.append(abs(q.numerator))
                    dens.append(q.denominator)
        g = 0
        for v in nums:
            g = gcd(g, v)
        l = 1
        for v in dens:
            l = l * v // gcd(l, v)
        scaled = self.scale(Fraction(l, g))
        _, lead = scaled.leading()
        lead_sign = lead.a if isinstance(lead, Quad) else lead
        if lead_sign < 0 or (lead_sign == 0 and lead.b < 0):
            scaled = -scaled
        return scaled

    def sorted_terms(self):
        key = self.ring.term_key
        return sorted(self.t.items(), key=lambda it: key(it[0]), reverse=True)

    # -- calculus and evaluation -------------------------------------------

    def diff(self, i):
        if not 0 <= i < self.ring.n:
            raise IndexError("variable index out of range")
        out = {}
        for e, c in self.t.items():
            k = e[i]
            if k:
                e2 = e[:i] + (k - 1,) + e[i + 1 :]
                c2 = c * k
                s = out.get(e2)
                out[e2] = c2 if s is None else s + c2
        return Poly(self.ring, {e: c for e, c in out.items() if c})

    def grad(self):
        return [self.diff(i) for i in range(self.ring.n)]

    def subst(self, images):
        """Ring homomorphism sending x_i to images[i] (all in one target ring)."""
        if len(images) != self.ring.n:
            raise ValueError("substitution image count mismatch")
        if not self.t:
            if images:
                return images[0].ring.zero()
            return self.ring.zero()
        target = images[0].ring if images else self.ring
        pows = [{0: target.one()} for _ in images]

        def power(i, k):
            cache = pows[i]
            got = cache.get(k)
            if got is None:
                got = power(i, k - 1) * images[i]
                cache[k] = got
            return got

        acc = target.zero()
        for e, c in self.t.items():
            term = target.const(coerce(c, target.d))
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            acc = acc + term
        return acc

    def eval(self, point):
        """Exact evaluation at a tuple of scalars."""
        if len(point) != self.ring.n:
            raise ValueError("evaluation point length mismatch")
        point = [self.ring.coeff(v) for v in point]
        pows = [{0: self.ring.coeff(1)} for _ in point]

        def power(i, k):
            cache = pows[i]
            got = cache.get(k)
            if got is None:
                got = power(i, k - 1) * point[i]
                cache[k] = got
            return got

        acc = self.ring.coeff(0)
        for e, c in self.t.items():
            v = c
            for i, k in enumerate(e):
                if k:
                    v = v * power(i, k)
            acc = acc + v
        return acc

    # -- division ----------------------------------------------------------

    def divmod_single(self, g, key=None):
        """Division by one polynomial: self = q*g + r, no term of r divisible
        by the leading term of g."""
        if not g:
            raise ZeroDivisionError("division by the zero polynomial")
        self._check(g)
        key = key or self.ring.term_key
        ge, gc = g.leading(key)
        gcinv = 1 / gc
        q = {}
        r = {}
        work = dict(self.t)
        while work:
            e = max(work, key=key)
            c = work.pop(e)
            if all(a >= b for a, b in zip(e, ge)):
                qe = tuple(a - b for a, b in zip(e, ge))
                qc = c * gcinv
                q[qe] = q.get(qe, self.ring.coeff(0)) + qc
                for e2, c2 in g.t.items():
                    if e2 == ge:
                        continue
                    e3 = tuple(a + b for a, b in zip(qe, e2))
                    s = work.get(e3, self.ring.coeff(0)) - qc * c2
                    if s:
                        work[e3] = s
                    else:
                        work.pop(e3, None)
            else:
                r[e] = c
        return (
            Poly(self.ring, {e: c for e, c in q.items() if c}),
            Poly(self.ring, r),
        )

    def exact_div(self, g):
        """Quotient self/g, raising ValueError if g does not divide exactly."""
        q, r = self.divmod_single(g)
        if r:
            raise ValueError("inexact polynomial division")
        return q

    def divisible_by(self, g):
        _, r = self.divmod_single(g)
        return not r

    # -- serialization ------------------------------------------------------

    def to_json(self):
        terms = [
            {"exp": list(e), "coeff": scalar_to_json(c)}
            for e, c in self.sorted_terms()
        ]
        field = {} if self.ring.d is None else {"d": self.ring.d}
        out = {"vars": list(self.ring.names), "field": field, "terms": terms}
        if any(w != 1 for w in self.ring.weights):
            out["weights"] = list(self.ring.weights)
        return out

    @staticmethod
    def from_json(obj, ring=None):
        d = obj.get("field", {}).get("d")
        if ring is None:
            ring = PolyRing(obj["vars"], d=d, weights=obj.get("weights"))
        terms = {
            tuple(t["exp"]): scalar_from_json(t["coeff"], d=ring.d)
            for t in obj["terms"]
        }
        return ring.from_dict(terms)

    def __repr__(self):
        if not self.t:
            return "0"
        bits = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                f"{self.ring.names[i]}^{k}" if k > 1 else self.ring.names[i]
                for i, k in enumerate(e)
                if k
            )
            if mono:
                bits.append(f"({c})*{mono}" if not _is_one(c) else mono)
            else:
                bits.append(f"({c})")
        return " + ".join(bits)


def _is_one(c):
    return c == 1


def product(polys, ring=None):
    """Product of an iterable of polynomials (1 for empty input)."""
    polys = list(polys)
    if not polys:
        if ring is None:
            raise ValueError("empty product needs an explicit ring")
        return ring.one()
    acc = polys[0]
    for p in polys[1:]:
        acc = acc * p
    return acc


def poly_pairing(u, f):
    """Sum of u[e]*f[e] over monomials: the dual pairing used by
    non-membership functionals."""
    if len(u.t) > len(f.t):
        u, f = f, u
    acc = u.ring.coeff(0)
    for e, c in u.t.items():
        c2 = f.t.get(e)
        if c2 is not None:
            acc = acc + c * c2
    return acc
