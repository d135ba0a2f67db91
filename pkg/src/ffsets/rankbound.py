"""Difference matrices, exact rank over GF(q), and the low-rank certificate.

For a point set A and a polynomial P, the difference matrix has entries
M[a, a'] = P(a - a').  When A avoids the nonzero support of P, M has a
nonzero diagonal and zero elsewhere, so its rank is exactly |A|.  In the
other direction, expanding P(x+y) and routing every term to whichever side
carries total degree <= deg(P)/2 writes M as U V + W Z with inner dimension
|S|, S the set of exponent vectors gamma with 2|gamma| <= deg P; hence
rank(M) <= 2|S| always.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .errors import (ContractError, FieldMismatchError,
                     InternalConsistencyError, ResourceGuardError)
from .field import Field, gf_matmul, point_coords, point_neg, point_sub
from .polyring import NEG_DEGREE, Poly, grlex_key
from .transform import poly_to_dense, synthesize_dense

SPLIT_CAP = 1 << 20       # largest q^n for enumerating the half-degree set
TABLE_EVAL_CAP = 1 << 16  # prefer full-table evaluation below this q^n


class PointSet:
    """Distinct points of F_q^n held in canonical (index) order."""

    __slots__ = ("field", "arity", "indices")

    def __init__(self, field: Field, arity: int, indices):
        idx = sorted(int(i) for i in indices)
        space = field.q ** arity
        if any(not 0 <= i < space for i in idx):
            raise ContractError("point index out of range")
        if len(set(idx)) != len(idx):
            raise ContractError("points must be pairwise distinct")
        self.field = field
        self.arity = arity
        self.indices = tuple(idx)

    def __len__(self):
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __eq__(self, other):
        return (isinstance(other, PointSet) and self.field == other.field
                and self.arity == other.arity and self.indices == other.indices)

    def coords(self) -> np.ndarray:
        return point_coords(self.field.q, self.arity,
                            np.asarray(self.indices, dtype=np.int64))

    def to_text(self) -> str:
        f = self.field
        lines = [f"q={f.q} n={self.arity}"]
        for row in self.coords():
            lines.append(" ".join(f.format_element(int(x)) for x in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, field: Field, text: str) -> "PointSet":
        lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        if not lines:
            raise ContractError("empty set file")
        header = dict(tok.split("=", 1) for tok in lines[0].split())
        q, n = int(header["q"]), int(header["n"])
        if q != field.q:
            raise FieldMismatchError(f"set file is over GF({q})")
        indices = []
        for ln in lines[1:]:
            coords = [field.parse_element(tok) for tok in ln.split()]
            if len(coords) != n:
                raise ContractError(f"expected {n} coordinates in {ln!r}")
            idx = 0
            for x in reversed(coords):
                idx = idx * q + x
            indices.append(idx)
        return cls(field, n, indices)


class DifferenceMatrix:
    """entries[i, j] = P(a_i - a_j) for the points of A in canonical order."""

    __slots__ = ("field", "points", "poly", "entries")

    def __init__(self, field: Field, points: PointSet, poly: Poly, entries: np.ndarray):
        self.field = field
        self.points = points
        self.poly = poly
        self.entries = entries


def difference_matrix(poly: Poly, points: PointSet) -> DifferenceMatrix:
    f = poly.field
    f.check_same(points.field)
    if poly.arity != points.arity:
        raise FieldMismatchError(
            f"arity mismatch: polynomial {poly.arity}, set {points.arity}")
    n = poly.arity
    idx = np.asarray(points.indices, dtype=np.int64)
    diffs = point_sub(f, n, idx[:, None], idx[None, :])
    if f.q ** n <= TABLE_EVAL_CAP:
        table = synthesize_dense(f, n, poly_to_dense(poly))
        entries = table[diffs]
    else:
        flat = diffs.reshape(-1)
        entries = poly.evaluate_batch(point_coords(f.q, n, flat))
        entries = entries.astype(f.dtype).reshape(diffs.shape)
    return DifferenceMatrix(f, points, poly, entries)


# ---------------------------------------------------------------------------
# Rank over GF(q).
# ---------------------------------------------------------------------------

def _rank_gf2(m: np.ndarray) -> int:
    """Row reduction with rows packed into Python ints (GF(2) fast path)."""
    pivots: dict[int, int] = {}
    for i in range(m.shape[0]):
        row = int.from_bytes(
            np.packbits(m[i].astype(np.uint8), bitorder="little").tobytes(),
            "little")
        while row:
            low = (row & -row).bit_length() - 1
            piv = pivots.get(low)
            if piv is None:
                pivots[low] = row
                break
            row ^= piv
    return len(pivots)


def _rank_generic(field: Field, m: np.ndarray) -> int:
    """Gaussian elimination with row pivoting via the field lookup tables."""
    work = np.array(m, dtype=field.dtype, copy=True)
    rows, cols = work.shape
    mul_t, sub_t, inv_t = field.mul_table, field.sub_table, field.inv_table
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(work[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            work[[r, piv]] = work[[piv, r]]
        work[r] = mul_t[inv_t[work[r, c]], work[r]]
        below = np.nonzero(work[r + 1:, c])[0]
        if below.size:
            rows_idx = r + 1 + below
            factors = work[rows_idx, c]
            work[rows_idx] = sub_t[work[rows_idx],
                                   mul_t[factors[:, None], work[r][None, :]]]
        r += 1
    return r


def rank_gf(m, field: Field) -> int:
    """Exact rank of a matrix over GF(q)."""
    m = np.asarray(m)
    if m.ndim != 2:
        raise ContractError("rank_gf expects a 2-d matrix")
    if m.size == 0:
        return 0
    if int(m.max()) >= field.q:
        raise FieldMismatchError("matrix entries out of field range")
    if field.q == 2:
        return _rank_gf2(m)
    return _rank_generic(field, m)


# ---------------------------------------------------------------------------
# The half-degree split of P(x + y).
# ---------------------------------------------------------------------------

class ClpSplit:
    """P(x+y) = sum over gamma in S of x^gamma a_gamma(y) + y^gamma b_gamma(x).

    S is the full set of exponent vectors with 2|gamma| <= deg P; a term
    x^beta y^delta of the expansion goes to the x side when 2|beta| <= deg P
    (ties included) and to the y side otherwise, in which case
    2|delta| <= deg P is automatic.
    """

    __slots__ = ("poly", "monomials", "a_polys", "b_polys", "expansion")

    def __init__(self, poly, monomials, a_polys, b_polys, expansion):
        self.poly = poly
        self.monomials = monomials
        self.a_polys = a_polys
        self.b_polys = b_polys
        self.expansion = expansion

    def reconstruct(self) -> Poly:
        """Reassemble the 2n-variable expansion from the split parts."""
        f = self.poly.field
        n = self.poly.arity
        total = Poly.zero(f, 2 * n)
        for gamma, a_poly in self.a_polys.items():
            for delta, c in a_poly.terms.items():
                total = total + Poly.monomial(f, 2 * n, gamma + delta, c)
        for gamma, b_poly in self.b_polys.items():
            for beta, c in b_poly.terms.items():
                total = total + Poly.monomial(f, 2 * n, beta + gamma, c)
        return total


def clp_split(poly: Poly) -> ClpSplit:
    """Expand P(x+y) and split every term onto a half-degree side."""
    f = poly.field
    n = poly.arity
    q = f.q
    if q ** n > SPLIT_CAP:
        raise ResourceGuardError(f"half-degree monomial set needs q^n <= {SPLIT_CAP}")
    deg = poly.degree
    half_twice = deg if deg != NEG_DEGREE else -1  # compare 2|gamma| <= deg

    # Expansion of P(x+y) over 2n variables by per-coordinate binomials.
    acc: dict[tuple[int, ...], int] = {}
    for exps, c in poly.terms.items():
        choices = []
        for e in exps:
            choices.append([(j, math.comb(e, j) % f.p) for j in range(e + 1)])
        for pick in itertools.product(*choices):
            binom = 1
            for _, cb in pick:
                binom = (binom * cb) % f.p
            if binom == 0:
                continue
            coeff = f.mul(c, binom)  # binom lies in the prime subfield
            beta = tuple(j for j, _ in pick)
            delta = tuple(e - j for (j, _), e in zip(pick, exps))
            key = beta + delta
            s = f.add(acc.get(key, 0), coeff)
            if s:
                acc[key] = s
            else:
                acc.pop(key, None)
    expansion = Poly(f, 2 * n, acc)

    a_polys: dict[tuple[int, ...], dict] = {}
    b_polys: dict[tuple[int, ...], dict] = {}
    for key, c in acc.items():
        beta, delta = key[:n], key[n:]
        if 2 * sum(beta) <= half_twice:
            a_polys.setdefault(beta, {})[delta] = c
        else:
            if 2 * sum(delta) > half_twice:
                raise InternalConsistencyError(
                    "term with both sides above half degree")
            b_polys.setdefault(delta, {})[beta] = c

    monomials = _half_degree_monomials(f, n, half_twice)
    mono_set = set(monomials)
    if not set(a_polys) <= mono_set or not set(b_polys) <= mono_set:
        raise InternalConsistencyError("split monomial outside the S set")
    return ClpSplit(
        poly, monomials,
        {g: Poly(f, n, t) for g, t in a_polys.items()},
        {g: Poly(f, n, t) for g, t in b_polys.items()},
        expansion)


def _half_degree_monomials(field: Field, n: int, half_twice) -> list[tuple[int, ...]]:
    """All gamma in {0..q-1}^n with 2|gamma| <= deg, in graded-lex order."""
    q = field.q
    idx = np.arange(q ** n, dtype=np.int64)
    w = np.zeros_like(idx)
    rem = idx.copy()
    for _ in range(n):
        w += rem % q
        rem //= q
    keep = np.nonzero(2 * w <= half_twice)[0]
    coords = point_coords(q, n, keep)
    out = [tuple(int(x) for x in row) for row in coords]
    out.sort(key=grlex_key)
    return out


class RankCertificate:
    """rank(M) together with the explicit factorisation M = U V + W Z."""

    __slots__ = ("rank", "monomials", "left", "right", "matrix")

    def __init__(self, rank, monomials, left, right, matrix):
        self.rank = rank
        self.monomials = monomials
        self.left = left    # (U, W), each |A| x |S|
        self.right = right  # (V, Z), each |S| x |A|
        self.matrix = matrix

    @property
    def s_size(self) -> int:
        return len(self.monomials)


def _monomial_columns(field: Field, coords: np.ndarray,
                      monomials: list[tuple[int, ...]]) -> np.ndarray:
    """Matrix with one column per monomial, evaluated at each coordinate row."""
    n_pts = coords.shape[0]
    out = np.zeros((n_pts, len(monomials)), dtype=field.dtype)
    pow_t, mul_t = field.pow_table, field.mul_table
    for t, gamma in enumerate(monomials):
        col = np.ones(n_pts, dtype=field.dtype)
        for i, e in enumerate(gamma):
            if e:
                col = mul_t[col, pow_t[coords[:, i], e]]
        out[:, t] = col
    return out


def certify(poly: Poly, points: PointSet) -> RankCertificate:
    """Rank of the difference matrix plus its rank <= 2|S| factorisation.

    M[i, j] = P(a_i + (-a_j)), so the split of P(x+y) specialises with
    x = a_i and y = -a_j; the reconstruction is checked entry by entry and
    a mismatch raises (it indicates a bug, never bad input).
    """
    f = poly.field
    dm = difference_matrix(poly, points)
    rank = rank_gf(dm.entries, f)
    split = clp_split(poly)
    monomials = split.monomials
    n = poly.arity

    idx = np.asarray(points.indices, dtype=np.int64)
    coords = point_coords(f.q, n, idx)
    neg_coords = point_coords(f.q, n, point_neg(f, n, idx))

    u = _monomial_columns(f, coords, monomials)
    z = _monomial_columns(f, neg_coords, monomials).T.copy()
    v = np.zeros((len(monomials), len(points)), dtype=f.dtype)
    w = np.zeros((len(points), len(monomials)), dtype=f.dtype)
    for t, gamma in enumerate(monomials):
        a_poly = split.a_polys.get(gamma)
        if a_poly is not None:
            v[t, :] = a_poly.evaluate_batch(neg_coords).astype(f.dtype)
        b_poly = split.b_polys.get(gamma)
        if b_poly is not None:
            w[:, t] = b_poly.evaluate_batch(coords).astype(f.dtype)

    recon = f.vec_add(gf_matmul(f, u, v), gf_matmul(f, w, z))
    if not np.array_equal(recon, dm.entries):
        raise InternalConsistencyError("certificate does not reconstruct M")
    if rank > 2 * len(monomials):
        raise InternalConsistencyError("rank exceeds 2|S| despite certificate")
    return RankCertificate(rank, monomials, (u, w), (v, z), dm)


# ---------------------------------------------------------------------------
# Debug dump format: "rows cols q" header, then rows of coefficient tuples.
# ---------------------------------------------------------------------------

def matrix_to_text(field: Field, m: np.ndarray) -> str:
    rows, cols = m.shape
    lines = [f"{rows} {cols} {field.q}"]
    for i in range(rows):
        lines.append(" ".join(field.format_element(int(x)) for x in m[i]))
    return "\n".join(lines) + "\n"


def matrix_from_text(field: Field, text: str) -> np.ndarray:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    rows, cols, q = (int(t) for t in lines[0].split())
    if q != field.q:
        raise FieldMismatchError(f"matrix file is over GF({q})")
    out = np.zeros((rows, cols), dtype=field.dtype)
    for i in range(rows):
        toks = lines[1 + i].split()
        if len(toks) != cols:
            raise ContractError(f"row {i} has {len(toks)} entries, expected {cols}")
        out[i] = [field.parse_element(t) for t in toks]
    return out
