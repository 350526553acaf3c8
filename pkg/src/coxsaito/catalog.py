"""Construction of the finite Coxeter groups in the catalog.

Each type is realized by explicit simple roots and a Gram matrix over Q or
a real quadratic field: A(l) in the l coordinates x_1..x_l of the sum-zero
hyperplane (so its Gram matrix is not the identity), B/D/F4 in standard
orthonormal coordinates, and the dihedral and H types in the basis of
simple roots.  The group is closed from the simple reflections; the
arrangement polynomial is the product of one linear form per mirror; the
basic invariants are built from classical formulas or root orbit sums and
certified by det(Jacobian) being a nonzero constant multiple of the
arrangement polynomial.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .poly import Poly, PolyRing, product
from .polymatrix import jacobian
from .scalars import Quad, invert, scalar_from_json, scalar_to_json


class UnsupportedTypeError(ValueError):
    pass


# seeds for the pseudo-random linear forms used in invariant construction;
# fixed so certificates are reproducible
INVARIANT_SEED = 41351
SAMPLING_SEED = 97003


def _phi(d=5):
    # golden ratio, the basic irrationality of the H types
    return Quad(Fraction(1, 2), Fraction(1, 2), 5)


# squared cosines of pi/k for the supported dihedral orders, exact
_COS2 = {
    3: Fraction(1, 4),
    4: Fraction(1, 2),
    5: lambda: Quad(Fraction(3, 8), Fraction(1, 8), 5),
    6: Fraction(3, 4),
    8: lambda: Quad(Fraction(1, 2), Fraction(1, 4), 2),
    10: lambda: Quad(Fraction(5, 8), Fraction(1, 8), 5),
    12: lambda: Quad(Fraction(1, 2), Fraction(1, 4), 3),
}
_DIHEDRAL_FIELD = {3: None, 4: None, 5: 5, 6: None, 8: 2, 10: 5, 12: 3}


@dataclass
class CoxeterDatum:
    name: str
    rank: int
    ring: PolyRing
    gram: list  # inner product matrix G on V, rows of scalars
    gram_dual: list  # Gamma = G^{-1}, the paper-facing Gram matrix
    simple_roots: list
    roots: list  # one representative per mirror
    mirror_forms: list  # normalized linear forms, one per mirror
    delta: Poly
    degrees: list
    group_order: int
    invariants: list
    jac_const: object  # det J = jac_const * delta
    p_ring: PolyRing
    irreducible: bool
    factors: list = field(default_factory=list)  # (datum, var offset) pairs
    group: list | None = None  # closure matrices; rebuilt on demand

    @property
    def exponents(self):
        return [w - 1 for w in self.degrees]

    @property
    def coxeter_number(self):
        return max(self.degrees)

    @property
    def mirror_count(self):
        return len(self.mirror_forms)

    def generators(self):
        return [_reflection_matrix(self.gram, a, self.ring.d) for a in self.simple_roots]

    def group_elements(self):
        if self.group is None:
            self.group = _closure(self.generators(), self.ring.d)
        return self.group

    def act(self, f, mat):
        """Substitute x -> M x into a polynomial on V."""
        images = [
            self.ring.linear_form([mat[i][j] for j in range(self.rank)])
            for i in range(self.rank)
        ]
        return f.subst(images)

    def inner(self, u, v):
        acc = self.ring.coeff(0)
        for i in range(self.rank):
            for j in range(self.rank):
                if u[i] and v[j]:
                    acc = acc + u[i] * self.gram[i][j] * v[j]
        return acc

    def mirror_form_of_root(self, alpha):
        coeffs = [
            sum((self.gram[i][j] * alpha[j] for j in range(self.rank)), self.ring.coeff(0))
            for i in range(self.rank)
        ]
        return self.ring.linear_form(coeffs)


# ---------------------------------------------------------------------------
# scalar matrix helpers


def _mat_vec(mat, vec, zero):
    return [sum((mat[i][j] * vec[j] for j in range(len(vec))), zero) for i in range(len(mat))]


def _mat_mul(a, b, zero):
    n = len(a)
    m = len(b[0])
    k = len(b)
    return tuple(
        tuple(sum((a[i][t] * b[t][j] for t in range(k)), zero) for j in range(m))
        for i in range(n)
    )


def _mat_inv(mat, zero, one):
    n = len(mat)
    a = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(mat)]
    for c in range(n):
        piv = next(i for i in range(c, n) if a[i][c])
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [v * inv for v in a[c]]
        for i in range(n):
            if i != c and a[i][c]:
                f = a[i][c]
                a[i] = [v - f * w for v, w in zip(a[i], a[c])]
    return [row[n:] for row in a]


def _reflection_matrix(gram, alpha, d):
    """Matrix of the reflection in the mirror orthogonal to alpha."""
    zero = Fraction(0) if d is None else Quad(0, 0, d)
    one = Fraction(1) if d is None else Quad(1, 0, d)
    n = len(alpha)
    g_alpha = _mat_vec(gram, alpha, zero)
    norm = sum((alpha[i] * g_alpha[i] for i in range(n)), zero)
    scale = 2 / norm
    return tuple(
        tuple(
            (one if i == j else zero) - alpha[i] * scale * g_alpha[j]
            for j in range(n)
        )
        for i in range(n)
    )


def _closure(gens, d):
    seen = {g: None for g in gens}
    zero = Fraction(0) if d is None else Quad(0, 0, d)
    n = len(gens[0])
    ident = tuple(
        tuple((zero + 1) if i == j else zero for j in range(n)) for i in range(n)
    )
    seen[ident] = None
    frontier = list(seen)
    while frontier:
        new = []
        for m in frontier:
            for g in gens:
                prod = _mat_mul(g, m, zero)
                if prod not in seen:
                    seen[prod] = None
                    new.append(prod)
        frontier = new
    return list(seen)


def _root_orbit(gens, simple_roots, d):
    zero = Fraction(0) if d is None else Quad(0, 0, d)
    seen = {tuple(r): None for r in simple_roots}
    frontier = list(seen)
    while frontier:
        new = []
        for v in frontier:
            for g in gens:
                w = tuple(_mat_vec(g, v, zero))
                if w not in seen:
                    seen[w] = None
                    new.append(w)
        frontier = new
    return list(seen)


def _normalize_direction(vec):
    lead = next(c for c in vec if c)
    inv = 1 / lead
    return tuple(c * inv for c in vec)


# ---------------------------------------------------------------------------
# per-type data


def _elementary_symmetric(values, ring):
    """All elementary symmetric polynomials e_1..e_n of the given polys."""
    es = [ring.one()]
    for v in values:
        nxt = [es[0]]
        for k in range(1, len(es) + 1):
            prev = es[k] if k < len(es) else ring.zero()
            nxt.append(prev + es[k - 1] * v)
        es = nxt
    return es[1:]


def _type_data(tag, param):
    """(rank, d, gram rows, simple roots, degrees) for one irreducible type."""
    if tag == "A":
        l = param
        gram = [[Fraction(1 if i == j else 0) + 1 for j in range(l)] for i in range(l)]
        roots = []
        for i in range(l - 1):
            r = [Fraction(0)] * l
            r[i], r[i + 1] = Fraction(1), Fraction(-1)
            roots.append(r)
        last = [Fraction(0)] * l
        last[l - 1] = Fraction(1)
        roots.append(last)
        return l, None, gram, roots, list(range(2, l + 2))
    if tag in ("B", "D"):
        l = param
        gram = [[Fraction(1 if i == j else 0) for j in range(l)] for i in range(l)]
        roots = []
        for i in range(l - 1):
            r = [Fraction(0)] * l
            r[i], r[i + 1] = Fraction(1), Fraction(-1)
            roots.append(r)
        last = [Fraction(0)] * l
        if tag == "B":
            last[l - 1] = Fraction(1)
            degrees = [2 * i for i in range(1, l + 1)]
        else:
            last[l - 2] = last[l - 1] = Fraction(1)
            degrees = sorted([2 * i for i in range(1, l)] + [l])
        roots.append(last)
        return l, None, gram, roots, degrees
    if tag == "F":
        gram = [[Fraction(1 if i == j else 0) for j in range(4)] for i in range(4)]
        half = Fraction(1, 2)
        roots = [
            [Fraction(0), Fraction(1), Fraction(-1), Fraction(0)],
            [Fraction(0), Fraction(0), Fraction(1), Fraction(-1)],
            [Fraction(0), Fraction(0), Fraction(0), Fraction(1)],
            [half, -half, -half, -half],
        ]
        return 4, None, gram, roots, [2, 6, 8, 12]
    if tag == "H":
        l = param
        d = 5
        phi = _phi()
        two = Quad(2, 0, 5)
        mone = Quad(-1, 0, 5)
        zero = Quad(0, 0, 5)
        gram = [[zero] * l for _ in range(l)]
        for i in range(l):
            gram[i][i] = two
        gram[0][1] = gram[1][0] = -phi
        for i in range(1, l - 1):
            gram[i][i + 1] = gram[i + 1][i] = mone
        roots = []
        for i in range(l):
            r = [zero] * l
            r[i] = Quad(1, 0, 5)
            roots.append(r)
        degrees = [2, 6, 10] if l == 3 else [2, 12, 20, 30]
        return l, d, gram, roots, degrees
    if tag == "I2":
        k = param
        if k not in _COS2:
            raise UnsupportedTypeError(
                f"I2({k}) is outside the supported catalog: its coordinate "
                "field is not rational or quadratic"
            )
        d = _DIHEDRAL_FIELD[k]
        cos2 = _COS2[k]
        if callable(cos2):
            cos2 = cos2()

        def mk(x):
            return Fraction(x) if d is None else Quad(Fraction(x), 0, d)

        g22 = invert(cos2 * 2)
        if d is not None and not isinstance(g22, Quad):
            g22 = Quad(g22, 0, d)
        gram = [[mk(2), mk(-1)], [mk(-1), g22]]
        roots = [[mk(1), mk(0)], [mk(0), mk(1)]]
        return 2, d, gram, roots, [2, k]
    raise UnsupportedTypeError(f"unknown type tag {tag!r}")


_EXPECTED_ORDER = {
    "A": lambda l: _factorial(l + 1),
    "B": lambda l: 2**l * _factorial(l),
    "D": lambda l: 2 ** (l - 1) * _factorial(l),
    "I2": lambda k: 2 * k,
    "H": lambda l: 120 if l == 3 else 14400,
    "F": lambda _l: 1152,
}


def _factorial(n):
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


# ---------------------------------------------------------------------------
# invariants


def _invariants_for(tag, param, ring, datum_stub):
    """Candidate basic invariants of the prescribed degrees."""
    l = datum_stub["rank"]
    degrees = datum_stub["degrees"]
    gram = datum_stub["gram"]
    x = ring.gens()

    def quadratic():
        acc = ring.zero()
        for i in range(l):
            for j in range(l):
                if gram[i][j]:
                    acc = acc + (x[i] * x[j]).scale(gram[i][j])
        return acc

    if tag == "A":
        ys = list(x) + [-sum(x[1:], x[0])]
        es = _elementary_symmetric(ys, ring)
        return [quadratic()] + es[2 : l + 1]
    if tag == "B":
        sq = [xi * xi for xi in x]
        return _elementary_symmetric(sq, ring)
    if tag == "D":
        ps = []
        for k in range(1, l):
            acc = ring.zero()
            for xi in x:
                acc = acc + xi ** (2 * k)
            ps.append(acc.scale(Fraction(1, 2 * k)))
        prod = product(x, ring)
        out = ps[:1]
        mids = sorted(
            [(p.deg(), 1, p) for p in ps[1:]] + [(l, 0, prod)], key=lambda t: (t[0], t[1])
        )
        return out + [p for _, _, p in mids]
    if tag in ("F", "H"):
        roots_all = datum_stub["all_roots"]
        forms = []
        for a in roots_all:
            coeffs = _mat_vec(gram, list(a), ring.coeff(0))
            forms.append(ring.linear_form(coeffs))
        out = [quadratic()]
        for dgr in degrees[1:]:
            acc = ring.zero()
            for f in forms:
                acc = acc + f**dgr
            out.append(acc)
        return out
    if tag == "I2":
        k = param
        if k % 2 == 0:
            # root orbit sum; an even power kills the sign ambiguity
            acc = ring.zero()
            for a in datum_stub["all_roots"]:
                coeffs = _mat_vec(gram, list(a), ring.coeff(0))
                acc = acc + ring.linear_form(coeffs) ** k
            if acc:
                return [quadratic(), acc]
        import random

        rng = random.Random(INVARIANT_SEED + k)
        gens = datum_stub["generators"]
        for _try in range(8):
            lam = ring.linear_form([rng.randint(1, 3), rng.randint(1, 3)])
            powed = lam**k
            acc = ring.zero()
            for m in _closure(gens, ring.d):
                images = [
                    ring.linear_form([m[i][j] for j in range(2)]) for i in range(2)
                ]
                acc = acc + powed.subst(images)
            if acc:
                return [quadratic(), acc]
        raise RuntimeError("failed to build a dihedral invariant from seeds")
    raise UnsupportedTypeError(tag)


# ---------------------------------------------------------------------------
# datum assembly


_TYPE_RE = re.compile(r"^([A-Z])(\d+)$|^I2\((\d+)\)$")


def parse_type(name):
    """Split a type string like 'A3', 'I2(5)' or 'B2xA1' into factors."""
    factors = []
    for part in name.split("x"):
        part = part.strip()
        m = _TYPE_RE.match(part)
        if not m:
            raise UnsupportedTypeError(f"cannot parse Coxeter type {part!r}")
        if m.group(3) is not None:
            factors.append(("I2", int(m.group(3))))
            continue
        tag, num = m.group(1), int(m.group(2))
        if tag == "E":
            raise UnsupportedTypeError(
                "E-type groups are outside the supported catalog"
            )
        if tag == "G" and num == 2:
            factors.append(("I2", 6))
            continue
        if tag == "A" and num >= 1:
            factors.append(("A", num))
        elif tag == "B" and num >= 2:
            factors.append(("B", num))
        elif tag == "C" and num >= 2:
            factors.append(("B", num))
        elif tag == "D" and num >= 3:
            factors.append(("D", num))
        elif tag == "H" and num in (3, 4):
            factors.append(("H", num))
        elif tag == "F" and num == 4:
            factors.append(("F", 4))
        else:
            raise UnsupportedTypeError(f"unsupported Coxeter type {part!r}")
    return factors


def canonical_name(factors):
    bits = []
    for tag, param in factors:
        bits.append(f"I2({param})" if tag == "I2" else f"{tag}{param}")
    return "x".join(bits)


def _build_irreducible(tag, param):
    rank, d, gram, simple_roots, degrees = _type_data(tag, param)
    ring = PolyRing([f"x{i+1}" for i in range(rank)], d=d)
    gram = [[ring.coeff(c) for c in row] for row in gram]
    simple_roots = [[ring.coeff(c) for c in r] for r in simple_roots]
    gens = [_reflection_matrix(gram, a, d) for a in simple_roots]

    all_roots = _root_orbit(gens, simple_roots, d)
    mirrors = {}
    for r in all_roots:
        mirrors.setdefault(_normalize_direction(r), r)
    mirror_roots = list(mirrors.values())
    n_mirrors = len(mirror_roots)
    exps = [w - 1 for w in degrees]
    if sum(exps) != n_mirrors:
        raise RuntimeError(
            f"{tag}{param}: mirror count {n_mirrors} != exponent sum {sum(exps)}"
        )
    h = max(degrees)
    for i in range(rank):
        if exps[i] + exps[rank - 1 - i] != h:
            raise RuntimeError(f"{tag}{param}: exponent symmetry broken")

    group = _closure(gens, d)
    expected = _EXPECTED_ORDER[tag](param)
    if len(group) != expected:
        raise RuntimeError(
            f"{tag}{param}: group closure has order {len(group)}, expected {expected}"
        )
    order_from_degrees = 1
    for w in degrees:
        order_from_degrees *= w
    if order_from_degrees != expected:
        raise RuntimeError(f"{tag}{param}: degree product != group order")

    forms = []
    for r in mirror_roots:
        coeffs = _mat_vec(gram, list(r), ring.coeff(0))
        forms.append(ring.linear_form(_normalize_direction(coeffs)))
    delta = product(forms, ring)

    stub = {
        "rank": rank,
        "degrees": degrees,
        "gram": gram,
        "all_roots": all_roots,
        "generators": gens,
    }
    invariants = [p.primitive() for p in _invariants_for(tag, param, ring, stub)]
    for p, w in zip(invariants, degrees):
        if p.whomog_degree() != w:
            raise RuntimeError(f"{tag}{param}: invariant has wrong degree")
        for g in gens:
            images = [ring.linear_form([g[i][j] for j in range(rank)]) for i in range(rank)]
            if p.subst(images) != p:
                raise RuntimeError(f"{tag}{param}: candidate invariant not invariant")

    jac = jacobian(invariants, ring)
    det = jac.det()
    if not det:
        raise RuntimeError(f"{tag}{param}: invariants are algebraically dependent")
    c = det.exact_div(delta)
    if not c.is_constant():
        raise RuntimeError(f"{tag}{param}: det J is not a constant multiple of delta")
    c = c.constant_value()

    zero = ring.coeff(0)
    one = ring.coeff(1)
    gram_dual = _mat_inv(gram, zero, one)
    p_ring = PolyRing([f"p{i+1}" for i in range(rank)], d=d, weights=degrees)

    return CoxeterDatum(
        name=canonical_name([(tag, param)]),
        rank=rank,
        ring=ring,
        gram=gram,
        gram_dual=gram_dual,
        simple_roots=simple_roots,
        roots=mirror_roots,
        mirror_forms=forms,
        delta=delta,
        degrees=degrees,
        group_order=len(group),
        invariants=invariants,
        jac_const=c,
        p_ring=p_ring,
        irreducible=True,
        group=group,
    )


def _embed_poly(p, big_ring, offset):
    terms = {}
    n = big_ring.n
    for e, c in p.t.items():
        big = [0] * n
        for i, k in enumerate(e):
            big[offset + i] = k
        terms[tuple(big)] = c
    return big_ring.from_dict(terms)


def _build_product(factors):
    parts = [_build_irreducible(tag, param) for tag, param in factors]
    d = None
    for p in parts:
        if p.ring.d is not None:
            if d is not None and d != p.ring.d:
                raise UnsupportedTypeError(
                    "product mixes incompatible quadratic fields"
                )
            d = p.ring.d
    rank = sum(p.rank for p in parts)
    ring = PolyRing([f"x{i+1}" for i in range(rank)], d=d)
    zero = ring.coeff(0)
    one = ring.coeff(1)

    gram = [[zero] * rank for _ in range(rank)]
    offset = 0
    factor_list = []
    simple_roots = []
    mirror_roots = []
    forms = []
    invariants = []
    degrees = []
    order = 1
    for p in parts:
        for i in range(p.rank):
            for j in range(p.rank):
                gram[offset + i][offset + j] = ring.coeff(p.gram[i][j])
        for r in p.simple_roots:
            simple_roots.append([zero] * offset + [ring.coeff(c) for c in r] + [zero] * (rank - offset - p.rank))
        for r in p.roots:
            mirror_roots.append([zero] * offset + [ring.coeff(c) for c in r] + [zero] * (rank - offset - p.rank))
        for f in p.mirror_forms:
            forms.append(_embed_poly(f, ring, offset))
        for q in p.invariants:
            invariants.append(_embed_poly(q, ring, offset))
        degrees.extend(p.degrees)
        order *= p.group_order
        factor_list.append((p, offset))
        offset += p.rank

    delta = product(forms, ring)
    jac = jacobian(invariants, ring)
    c = jac.det().exact_div(delta)
    c = c.constant_value()
    gram_dual = _mat_inv(gram, zero, one)
    p_ring = PolyRing([f"p{i+1}" for i in range(rank)], d=d, weights=degrees)
    gens = [_reflection_matrix(gram, a, d) for a in simple_roots]
    group = _closure(gens, d) if order <= 4096 else None
    if group is not None and len(group) != order:
        raise RuntimeError("product closure has unexpected order")

    return CoxeterDatum(
        name=canonical_name(factors),
        rank=rank,
        ring=ring,
        gram=gram,
        gram_dual=gram_dual,
        simple_roots=simple_roots,
        roots=mirror_roots,
        mirror_forms=forms,
        delta=delta,
        degrees=degrees,
        group_order=order,
        invariants=invariants,
        jac_const=c,
        p_ring=p_ring,
        irreducible=len(factors) == 1,
        factors=factor_list,
        group=group,
    )


_DATUM_CACHE = {}


def build_datum(name):
    """Build (and memoize) the full datum for a type string like 'B3'."""
    factors = parse_type(name)
    key = canonical_name(factors)
    got = _DATUM_CACHE.get(key)
    if got is None:
        if len(factors) == 1:
            got = _build_irreducible(*factors[0])
        else:
            got = _build_product(factors)
        _DATUM_CACHE[key] = got
    return got


# ---------------------------------------------------------------------------
# operators on the datum


def reynolds_average(datum, f):
    """Group average; a projection of S onto the invariant ring."""
    acc = datum.ring.zero()
    for mat in datum.group_elements():
        acc = acc + datum.act(f, mat)
    return acc.scale(Fraction(1, datum.group_order))


def is_invariant(datum, f):
    """Invariance under the simple reflections (hence under the group)."""
    return all(datum.act(f, g) == f for g in datum.generators())


def stabilizer_components(datum, point):
    """Mirrors through the point, grouped into components of the graph with
    edges where the roots are not orthogonal."""
    point = [datum.ring.coeff(v) for v in point]
    vanishing = []
    for idx, form in enumerate(datum.mirror_forms):
        if form.eval(point) == 0:
            vanishing.append(idx)
    parent = {i: i for i in vanishing}

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a_pos, i in enumerate(vanishing):
        for j in vanishing[a_pos + 1 :]:
            if datum.inner(datum.roots[i], datum.roots[j]):
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    comps = {}
    for i in vanishing:
        comps.setdefault(find(i), []).append(i)
    return sorted(comps.values(), key=len)


# ---------------------------------------------------------------------------
# fixtures


def datum_to_json(datum):
    return {
        "type": datum.name,
        "rank": datum.rank,
        "field": {} if datum.ring.d is None else {"d": datum.ring.d},
        "degrees": datum.degrees,
        "group_order": datum.group_order,
        "gram": [[scalar_to_json(c) for c in row] for row in datum.gram],
        "gram_dual": [[scalar_to_json(c) for c in row] for row in datum.gram_dual],
        "simple_roots": [[scalar_to_json(c) for c in r] for r in datum.simple_roots],
        "roots": [[scalar_to_json(c) for c in r] for r in datum.roots],
        "delta": datum.delta.to_json(),
        "invariants": [p.to_json() for p in datum.invariants],
        "jac_const": scalar_to_json(datum.jac_const),
    }


def datum_from_json(doc):
    """Rebuild an irreducible datum from a fixture; the group closure is
    reconstructed lazily only if an operation needs the full element list."""
    d = doc["field"].get("d")
    rank = doc["rank"]
    ring = PolyRing([f"x{i+1}" for i in range(rank)], d=d)

    def mat(rows):
        return [[scalar_from_json(c, d=d) for c in row] for row in rows]

    gram = mat(doc["gram"])
    gram_dual = mat(doc["gram_dual"])
    simple_roots = mat(doc["simple_roots"])
    roots = mat(doc["roots"])
    degrees = list(doc["degrees"])
    forms = []
    zero = ring.coeff(0)
    for r in roots:
        coeffs = _mat_vec(gram, list(r), zero)
        forms.append(ring.linear_form(_normalize_direction(coeffs)))
    datum = CoxeterDatum(
        name=doc["type"],
        rank=rank,
        ring=ring,
        gram=gram,
        gram_dual=gram_dual,
        simple_roots=simple_roots,
        roots=roots,
        mirror_forms=forms,
        delta=Poly.from_json(doc["delta"], ring),
        degrees=degrees,
        group_order=doc["group_order"],
        invariants=[Poly.from_json(p, ring) for p in doc["invariants"]],
        jac_const=scalar_from_json(doc["jac_const"], d=d),
        p_ring=PolyRing([f"p{i+1}" for i in range(rank)], d=d, weights=degrees),
        irreducible=True,
        group=None,
    )
    return datum


def save_fixture(datum, path):
    with open(path, "w") as fh:
        json.dump(datum_to_json(datum), fh, indent=1, sort_keys=True)
        fh.write("\n")
