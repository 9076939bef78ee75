"""Quadratic forms and pencils over a rational function field.

Forms are symmetric matrices with entries in any odd-characteristic field
whose elements support arithmetic operators (rational functions, or
elements of an algebra k[x]/(f)).  Provides the characteristic polynomial
of a pencil, congruence diagonalization, epsilon invariants of the rank-4
pencil members, and the local line criterion for rank-5 members that split
off a hyperbolic plane.
"""

from __future__ import annotations

from . import polyring
from .polyring import Poly
from .funcfield import (
    FuncField,
    Place,
    RatFunc,
    as_ratfunc,
    hilbert,
    is_local_square,
    ratfunc_from_str,
    func_field,
)
from .etale import SimpleExtension, AlgebraElem, factor_over_funcfield


class QuadFormError(Exception):
    pass


class LemmaHypothesisError(QuadFormError):
    """The rank-2 part is not hyperbolic, so the line criterion is silent."""


def _zero_one(ring):
    if hasattr(ring, "ZERO"):
        return ring.ZERO, ring.ONE
    return ring.zero(), ring.one()


class QuadForm:
    """Symmetric n x n matrix over a field-like ring of odd characteristic."""

    __slots__ = ("ring", "rows", "n")

    def __init__(self, ring, rows):
        n = len(rows)
        if n > 5:
            raise QuadFormError("forms larger than 5 x 5 are not supported")
        rows = [list(r) for r in rows]
        for r in rows:
            if len(r) != n:
                raise QuadFormError("matrix is not square")
        for i in range(n):
            for j in range(i):
                if not _is_zero(rows[i][j] - rows[j][i]):
                    raise QuadFormError("matrix is not symmetric")
        self.ring = ring
        self.rows = rows
        self.n = n

    def entry(self, i: int, j: int):
        return self.rows[i][j]

    def block(self, indices) -> "QuadForm":
        idx = list(indices)
        return QuadForm(self.ring, [[self.rows[i][j] for j in idx] for i in idx])

    def scale(self, c) -> "QuadForm":
        return QuadForm(self.ring, [[c * e for e in r] for r in self.rows])

    def __add__(self, other: "QuadForm") -> "QuadForm":
        if self.n != other.n:
            raise QuadFormError("size mismatch")
        return QuadForm(self.ring, [[a + b for a, b in zip(r1, r2)]
                                    for r1, r2 in zip(self.rows, other.rows)])

    def det(self):
        zero, _ = _zero_one(self.ring)
        return det_ring(self.rows, zero)

    def __repr__(self):
        return f"QuadForm(n={self.n})"


def _is_zero(x) -> bool:
    return x.is_zero()


def det_ring(rows, zero):
    """Determinant by minor expansion over any commutative ring.

    Memoized on column masks, so fine up to 5 x 5.
    """
    n = len(rows)
    if n == 0:
        raise QuadFormError("empty matrix")
    memo = {}

    def rec(i: int, mask: int):
        if i == n:
            return None  # signals empty product; handled by caller
        key = mask
        if key in memo:
            return memo[key]
        out = None
        sign = 1
        for j in range(n):
            bit = 1 << j
            if not mask & bit:
                continue
            e = rows[i][j]
            if not _is_zero(e):
                sub = rec(i + 1, mask & ~bit)
                term = e if sub is None else e * sub
                if sign < 0:
                    term = -term
                out = term if out is None else out + term
            sign = -sign
        if out is None:
            out = zero
        memo[key] = out
        return out

    full = (1 << n) - 1
    res = rec(0, full)
    return zero if res is None else res


class Pencil:
    """Pair of 5 x 5 forms over k with separable degree-5 char polynomial."""

    __slots__ = ("M0", "Minf", "field", "f")

    def __init__(self, M0: QuadForm, Minf: QuadForm):
        if M0.n != 5 or Minf.n != 5:
            raise QuadFormError("pencil forms must be 5 x 5")
        if not isinstance(M0.ring, FuncField) or M0.ring is not Minf.ring:
            raise QuadFormError("pencil forms must share one function field")
        self.M0 = M0
        self.Minf = Minf
        self.field = M0.ring
        f = charpoly(M0, Minf)
        if f.degree != 5:
            raise QuadFormError("characteristic polynomial must have degree 5")
        if self.field.is_zero(polyring.discriminant(f)):
            raise QuadFormError("characteristic polynomial must be separable")
        self.f = f

    def member_matrix(self, ext: SimpleExtension):
        """M0 + theta * Minf over the algebra defined by a charpoly factor."""
        th = ext.gen()
        return [[ext.element([self.M0.entry(i, j)]) + th * ext.element([self.Minf.entry(i, j)])
                 for j in range(5)] for i in range(5)]

    def __repr__(self):
        return f"Pencil(f={self.f!r})"


def charpoly(M0: QuadForm, Minf: QuadForm) -> Poly:
    """det(M0 + x * Minf) as a polynomial in x over the function field."""
    K = M0.ring
    if M0.n != Minf.n:
        raise QuadFormError("size mismatch")
    n = M0.n
    rows = [[Poly(K, [M0.entry(i, j), Minf.entry(i, j)]) for j in range(n)]
            for i in range(n)]
    return det_ring(rows, Poly.zero(K))


def diagonalize(Q: QuadForm):
    """Congruence diagonalization: returns (diagonal entries, P) with P^T Q P diagonal.

    Symmetric Gaussian elimination with the standard fix when the diagonal
    vanishes: add a row/column pair to make a nonzero diagonal entry (valid
    because the characteristic is odd).
    """
    zero, one = _zero_one(Q.ring)
    n = Q.n
    A = [row[:] for row in Q.rows]
    P = [[one if i == j else zero for j in range(n)] for i in range(n)]

    def add_multiple(dst, src, c):
        # column operation on A and P, mirrored as a row operation on A
        for i in range(n):
            A[i][dst] = A[i][dst] + c * A[i][src]
        for j in range(n):
            A[dst][j] = A[dst][j] + c * A[src][j]
        for i in range(n):
            P[i][dst] = P[i][dst] + c * P[i][src]

    def swap(i, j):
        for r in range(n):
            A[r][i], A[r][j] = A[r][j], A[r][i]
        A[i], A[j] = A[j], A[i]
        for r in range(n):
            P[r][i], P[r][j] = P[r][j], P[r][i]

    for piv in range(n):
        if _is_zero(A[piv][piv]):
            k = next((i for i in range(piv + 1, n) if not _is_zero(A[i][i])), None)
            if k is not None:
                swap(piv, k)
            else:
                pair = next(((i, j) for i in range(piv, n) for j in range(i + 1, n)
                             if not _is_zero(A[i][j])), None)
                if pair is None:
                    break  # remaining block is zero
                i, j = pair
                add_multiple(i, j, one)
                if i != piv:
                    swap(piv, i)
        d = A[piv][piv]
        for i in range(piv + 1, n):
            if not _is_zero(A[piv][i]):
                add_multiple(i, piv, -(A[piv][i] / d))
    return [A[i][i] for i in range(n)], P


def rank(Q: QuadForm) -> int:
    diag, _ = diagonalize(Q)
    return sum(1 for d in diag if not _is_zero(d))


def kernel_vector(rows, ring):
    """A nonzero kernel vector of a singular symmetric matrix, or None."""
    zero, one = _zero_one(ring)
    n = len(rows)
    A = [row[:] for row in rows]
    piv_of_col = [None] * n
    r = 0
    for c in range(n):
        k = next((i for i in range(r, n) if not _is_zero(A[i][c])), None)
        if k is None:
            continue
        A[r], A[k] = A[k], A[r]
        inv = one / A[r][c]
        A[r] = [inv * e for e in A[r]]
        for i in range(n):
            if i != r and not _is_zero(A[i][c]):
                ci = A[i][c]
                A[i] = [a - ci * b for a, b in zip(A[i], A[r])]
        piv_of_col[c] = r
        r += 1
    free = next((c for c in range(n) if piv_of_col[c] is None), None)
    if free is None:
        return None
    v = [zero] * n
    v[free] = one
    for c in range(n):
        if piv_of_col[c] is not None:
            v[c] = -A[piv_of_col[c]][free]
    return v


class EpsilonInvariant:
    """Discriminant of a rank-4 pencil member, in the algebra of its factor."""

    __slots__ = ("factor", "ext", "value")

    def __init__(self, factor: Poly, ext: SimpleExtension, value: AlgebraElem):
        self.factor = factor
        self.ext = ext
        self.value = value

    def __repr__(self):
        return f"EpsilonInvariant(factor={self.factor!r}, value={self.value!r})"


def epsilon_at_factor(P: Pencil, g: Poly, hyperplane_rule=None) -> EpsilonInvariant:
    """Invariant of the member at a root of one monic factor g of P.f.

    For the member M0 + theta*Minf over k[x]/(g): confirm rank 4, find
    the kernel vector, restrict to the first standard hyperplane u_j = 0
    not containing it, and return the determinant of the restriction.
    g must be irreducible (the kernel computation divides by entries).
    """
    ext = SimpleExtension(g)
    M = P.member_matrix(ext)
    v = kernel_vector(M, ext)
    if v is None:
        raise QuadFormError("pencil member at a root is nonsingular")
    if hyperplane_rule is None:
        j = next(i for i in range(5) if not v[i].is_zero())
    else:
        j = hyperplane_rule(v)
    idx = [i for i in range(5) if i != j]
    sub = [[M[a][b] for b in idx] for a in idx]
    val = det_ring(sub, ext.zero())
    if val.is_zero():
        raise QuadFormError("pencil member has rank below 4")
    return EpsilonInvariant(g, ext, val)


def epsilon_invariants(P: Pencil, hyperplane_rule=None) -> list:
    """One invariant per irreducible factor of the char polynomial."""
    return [
        epsilon_at_factor(P, g, hyperplane_rule)
        for g in factor_over_funcfield(P.f)
    ]


def line_on_rank5_local(rank2: QuadForm, rank3: QuadForm, place: Place) -> bool:
    """Whether the orthogonal sum of the two blocks contains a line over k_nu.

    Valid when the rank-2 block is hyperbolic over k_nu; then a line exists
    iff the conic given by the rank-3 block has a k_nu-point, read off a
    Hilbert symbol of its diagonalization.
    """
    if rank2.n != 2 or rank3.n != 3:
        raise QuadFormError("expected blocks of size 2 and 3")
    d2, _ = diagonalize(rank2)
    if any(e.is_zero() for e in d2):
        raise QuadFormError("rank-2 block is degenerate")
    if not is_local_square(-(d2[0] * d2[1]), place):
        raise LemmaHypothesisError("rank-2 block is not hyperbolic at this place")
    d3, _ = diagonalize(rank3)
    if any(e.is_zero() for e in d3):
        raise QuadFormError("rank-3 block is degenerate")
    a, b, c = d3
    return hilbert(-(a * c), -(b * c), place) == 1


def quadform_from_strs(p: int, rows) -> QuadForm:
    K = func_field(p)
    mat = [[ratfunc_from_str(s, K.base) if isinstance(s, str) else as_ratfunc(s, K)
            for s in r] for r in rows]
    return QuadForm(K, mat)


def pencil_to_json(P: Pencil) -> dict:
    return {
        "p": P.field.p,
        "M0": [[str(e) for e in r] for r in P.M0.rows],
        "Minf": [[str(e) for e in r] for r in P.Minf.rows],
    }


def pencil_from_json(obj: dict) -> Pencil:
    p = int(obj["p"])
    return Pencil(quadform_from_strs(p, obj["M0"]), quadform_from_strs(p, obj["Minf"]))
