"""Rectangular matrices of polynomials: products, determinants, adjugates.

Determinants use memoized cofactor expansion up to size 4 and Bareiss
fraction-free elimination above that; adjugates share the cofactor memo.
"""

from __future__ import annotations

from .poly import Poly


class PolyMatrix:
    __slots__ = ("ring", "m", "n", "e")

    def __init__(self, ring, entries):
        self.ring = ring
        self.e = [list(row) for row in entries]
        self.m = len(self.e)
        self.n = len(self.e[0]) if self.m else 0
        for row in self.e:
            if len(row) != self.n:
                raise ValueError("ragged matrix")
            for p in row:
                if p.ring != ring:
                    raise ValueError("matrix entry in a different ring")

    @staticmethod
    def identity(ring, n):
        return PolyMatrix(
            ring,
            [[ring.one() if i == j else ring.zero() for j in range(n)] for i in range(n)],
        )

    @staticmethod
    def from_scalars(ring, rows):
        return PolyMatrix(ring, [[ring.const(c) for c in row] for row in rows])

    def __getitem__(self, ij):
        i, j = ij
        return self.e[i][j]

    def row(self, i):
        return list(self.e[i])

    def col(self, j):
        return [self.e[i][j] for i in range(self.m)]

    def transpose(self):
        return PolyMatrix(self.ring, [[self.e[i][j] for i in range(self.m)] for j in range(self.n)])

    def __add__(self, other):
        return PolyMatrix(
            self.ring,
            [[self.e[i][j] + other.e[i][j] for j in range(self.n)] for i in range(self.m)],
        )

    def __sub__(self, other):
        return PolyMatrix(
            self.ring,
            [[self.e[i][j] - other.e[i][j] for j in range(self.n)] for i in range(self.m)],
        )

    def __mul__(self, other):
        if isinstance(other, PolyMatrix):
            if self.n != other.m:
                raise ValueError("matrix shape mismatch")
            z = self.ring.zero()
            out = []
            for i in range(self.m):
                row = []
                for j in range(other.n):
                    acc = z
                    for k in range(self.n):
                        a = self.e[i][k]
                        b = other.e[k][j]
                        if a and b:
                            acc = acc + a * b
                    row.append(acc)
                out.append(row)
            return PolyMatrix(self.ring, out)
        return self.scale(other)

    def scale(self, c):
        return PolyMatrix(self.ring, [[p * c for p in row] for row in self.e])

    def mul_vec(self, vec):
        if len(vec) != self.n:
            raise ValueError("vector length mismatch")
        z = self.ring.zero()
        out = []
        for i in range(self.m):
            acc = z
            for k in range(self.n):
                a = self.e[i][k]
                b = vec[k]
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return out

    def __eq__(self, other):
        return (
            isinstance(other, PolyMatrix)
            and self.m == other.m
            and self.n == other.n
            and self.e == other.e
        )

    def is_symmetric(self):
        if self.m != self.n:
            return False
        return all(
            self.e[i][j] == self.e[j][i] for i in range(self.m) for j in range(i)
        )

    def map(self, fn):
        rows = [[fn(p) for p in row] for row in self.e]
        ring = rows[0][0].ring if rows and rows[0] else self.ring
        return PolyMatrix(ring, rows)

    # -- determinants ------------------------------------------------------

    def _minor_memo(self):
        memo = {}

        def det_sub(rows, cols):
            if not rows:
                return self.ring.one()
            key = (rows, cols)
            got = memo.get(key)
            if got is not None:
                return got
            if len(rows) == 1:
                val = self.e[rows[0]][cols[0]]
            else:
                r0 = rows[0]
                rest = rows[1:]
                val = self.ring.zero()
                for k, c in enumerate(cols):
                    a = self.e[r0][c]
                    if not a:
                        continue
                    sub = det_sub(rest, cols[:k] + cols[k + 1 :])
                    term = a * sub
                    val = val + term if k % 2 == 0 else val - term
            memo[key] = val
            return val

        return det_sub

    def det(self):
        if self.m != self.n:
            raise ValueError("determinant of a non-square matrix")
        n = self.n
        if n == 0:
            return self.ring.one()
        if n <= 4:
            det_sub = self._minor_memo()
            return det_sub(tuple(range(n)), tuple(range(n)))
        return self._det_bareiss()

    def _det_bareiss(self):
        n = self.n
        a = [[self.e[i][j] for j in range(n)] for i in range(n)]
        sign = 1
        prev = self.ring.one()
        for k in range(n - 1):
            # pivot search: any row with nonzero entry in column k
            piv = None
            for i in range(k, n):
                if a[i][k]:
                    piv = i
                    break
            if piv is None:
                return self.ring.zero()
            if piv != k:
                a[k], a[piv] = a[piv], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    num = a[k][k] * a[i][j] - a[i][k] * a[k][j]
                    a[i][j] = num.exact_div(prev)
                a[i][k] = self.ring.zero()
            prev = a[k][k]
        d = a[n - 1][n - 1]
        return d if sign == 1 else -d

    def adjugate(self):
        """Matrix ad with self * ad == det(self) * identity, exactly."""
        if self.m != self.n:
            raise ValueError("adjugate of a non-square matrix")
        n = self.n
        det_sub = self._minor_memo()
        all_idx = tuple(range(n))
        out = [[None] * n for _ in range(n)]
        for i in range(n):
            rows = all_idx[:i] + all_idx[i + 1 :]
            for j in range(n):
                cols = all_idx[:j] + all_idx[j + 1 :]
                # entry (j, i) of the adjugate is the signed (i, j) cofactor
                m = det_sub(rows, cols)
                out[j][i] = m if (i + j) % 2 == 0 else -m
        return PolyMatrix(self.ring, out)

    def to_json(self):
        return {"rows": self.m, "cols": self.n, "entries": [[p.to_json() for p in row] for row in self.e]}

    @staticmethod
    def from_json(obj, ring):
        return PolyMatrix(
            ring, [[Poly.from_json(p, ring) for p in row] for row in obj["entries"]]
        )

    def __repr__(self):
        return "PolyMatrix[\n" + "\n".join("  [" + ", ".join(map(str, row)) + "]" for row in self.e) + "\n]"


def jacobian(polys, ring=None):
    """Rows are the gradients of the given polynomials."""
    if not polys:
        raise ValueError("empty Jacobian")
    ring = ring or polys[0].ring
    return PolyMatrix(ring, [[p.diff(j) for j in range(ring.n)] for p in polys])


def hessian(f):
    """Symmetric matrix of second partials of f."""
    ring = f.ring
    grads = f.grad()
    rows = []
    for i in range(ring.n):
        rows.append([grads[i].diff(j) for j in range(ring.n)])
    return PolyMatrix(ring, rows)
