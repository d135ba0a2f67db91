"""Reduced multivariate polynomials over GF(q), plus univariate polynomials.

A reduced polynomial has every variable exponent in {0, ..., q-1}; it is the
canonical representative of a function F_q^n -> F_q.  Terms are stored
sparsely as a dict mapping exponent tuples to nonzero coefficients.  All
ring operations reduce eagerly, so results stay canonical.

Exponent reduction uses x^q = x: an exponent e > q-1 collapses to
((e-1) mod (q-1)) + 1, which is the unique representative in {1, ..., q-1}
giving the same function on all of F_q (including x = 0, which is why the
image never collapses to exponent 0).
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .errors import ContractError, FieldMismatchError
from .field import Field

NEG_DEGREE = float("-inf")  # degree of the zero polynomial; below every int


def reduce_exponent(e: int, q: int) -> int:
    """Smallest e' in {0,...,q-1} with x**e == x**e' for all x in GF(q)."""
    if e < 0:
        raise ContractError(f"exponent {e} must be nonnegative")
    if e <= q - 1:
        return e
    return (e - 1) % (q - 1) + 1


def grlex_key(exponents: tuple[int, ...]) -> tuple:
    """Graded lexicographic sort key: total degree first, then lex."""
    return (sum(exponents), exponents)


class Poly:
    """Sparse reduced multivariate polynomial over a fixed field.

    Immutable by convention: operations return new instances and never
    mutate `terms`.
    """

    __slots__ = ("field", "arity", "terms")

    def __init__(self, field: Field, arity: int, terms: dict[tuple[int, ...], int]):
        self.field = field
        self.arity = arity
        self.terms = terms

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, field: Field, arity: int) -> "Poly":
        return cls(field, arity, {})

    @classmethod
    def constant(cls, field: Field, arity: int, c: int) -> "Poly":
        c = field.check(c)
        return cls(field, arity, {(0,) * arity: c} if c else {})

    @classmethod
    def variable(cls, field: Field, arity: int, i: int) -> "Poly":
        if not 0 <= i < arity:
            raise ContractError(f"variable index {i} out of range for arity {arity}")
        exps = tuple(1 if j == i else 0 for j in range(arity))
        return cls(field, arity, {exps: 1})

    @classmethod
    def monomial(cls, field: Field, arity: int, exponents, coeff: int = 1) -> "Poly":
        exponents = tuple(int(e) for e in exponents)
        if len(exponents) != arity:
            raise ContractError("exponent vector arity mismatch")
        exponents = tuple(reduce_exponent(e, field.q) for e in exponents)
        coeff = field.check(coeff)
        return cls(field, arity, {exponents: coeff} if coeff else {})

    @classmethod
    def from_terms(cls, field: Field, arity: int, items) -> "Poly":
        """Build from (exponents, coeff) pairs, merging and reducing."""
        acc: dict[tuple[int, ...], int] = {}
        for exps, c in items:
            exps = tuple(reduce_exponent(int(e), field.q) for e in exps)
            if len(exps) != arity:
                raise ContractError("exponent vector arity mismatch")
            c = field.add(acc.get(exps, 0), field.check(c))
            if c:
                acc[exps] = c
            else:
                acc.pop(exps, None)
        return cls(field, arity, acc)

    # -- inspection ----------------------------------------------------------

    @property
    def degree(self):
        """Total degree, or NEG_DEGREE for the zero polynomial."""
        if not self.terms:
            return NEG_DEGREE
        return max(sum(e) for e in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self) -> int:
        return self.terms.get((0,) * self.arity, 0)

    def sorted_terms(self) -> list[tuple[tuple[int, ...], int]]:
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]))

    def __eq__(self, other):
        return (isinstance(other, Poly) and self.field == other.field
                and self.arity == other.arity and self.terms == other.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for exps, c in self.sorted_terms():
            mono = "*".join(
                f"x{i + 1}" + (f"^{e}" if e > 1 else "")
                for i, e in enumerate(exps) if e)
            cs = self.field.pretty(c)
            if mono:
                bits.append(mono if cs == "1" else f"({cs})*{mono}")
            else:
                bits.append(cs)
        return " + ".join(bits)

    def _check_compat(self, other: "Poly"):
        self.field.check_same(other.field)
        if self.arity != other.arity:
            raise FieldMismatchError(
                f"arity mismatch: {self.arity} vs {other.arity}")

    # -- ring operations -----------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        self._check_compat(other)
        acc = dict(self.terms)
        f = self.field
        for exps, c in other.terms.items():
            s = f.add(acc.get(exps, 0), c)
            if s:
                acc[exps] = s
            else:
                acc.pop(exps, None)
        return Poly(self.field, self.arity, acc)

    def __neg__(self) -> "Poly":
        f = self.field
        return Poly(self.field, self.arity,
                    {e: f.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def scale(self, c: int) -> "Poly":
        c = self.field.check(c)
        if c == 0:
            return Poly.zero(self.field, self.arity)
        f = self.field
        return Poly(self.field, self.arity,
                    {e: f.mul(c, v) for e, v in self.terms.items()})

    def __mul__(self, other: "Poly") -> "Poly":
        self._check_compat(other)
        f = self.field
        q = f.q
        acc: dict[tuple[int, ...], int] = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                exps = tuple(reduce_exponent(x + y, q) for x, y in zip(ea, eb))
                c = f.add(acc.get(exps, 0), f.mul(ca, cb))
                if c:
                    acc[exps] = c
                else:
                    acc.pop(exps, None)
        return Poly(self.field, self.arity, acc)

    def pow(self, e: int) -> "Poly":
        if e < 0:
            raise ContractError("negative polynomial power")
        result = Poly.constant(self.field, self.arity, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- evaluation and composition -------------------------------------------

    def evaluate(self, point) -> int:
        """Value at a point given as a sequence of element ints (0^0 = 1)."""
        if len(point) != self.arity:
            raise FieldMismatchError("point arity mismatch")
        f = self.field
        total = 0
        for exps, c in self.terms.items():
            v = c
            for x, e in zip(point, exps):
                if e:
                    v = f.mul(v, f.pow(x, e))
            total = f.add(total, v)
        return total

    def evaluate_batch(self, points: np.ndarray) -> np.ndarray:
        """Vectorised evaluation; points has shape (N, arity), values in 0..q-1."""
        f = self.field
        n_pts = points.shape[0]
        acc = np.zeros(n_pts, dtype=np.int64)
        pow_t = f.pow_table
        add_t = f.add_table
        mul_t = f.mul_table
        for exps, c in self.terms.items():
            term = np.full(n_pts, c, dtype=f.dtype)
            for i, e in enumerate(exps):
                if e:
                    term = mul_t[term, pow_t[points[:, i], e]]
            acc = add_t[acc, term].astype(np.int64)
        return acc

    def substitute(self, maps: list["Poly"]) -> "Poly":
        """Compose with a polynomial map: result(a) = self(maps_1(a), ...)."""
        if len(maps) != self.arity:
            raise FieldMismatchError("substitution needs one map per variable")
        for m in maps:
            self.field.check_same(m.field)
            if m.arity != maps[0].arity:
                raise FieldMismatchError("substitution maps must share arity")
        out_arity = maps[0].arity if maps else 0
        cache: dict[tuple[int, int], Poly] = {}

        def var_power(i: int, e: int) -> Poly:
            key = (i, e)
            if key not in cache:
                cache[key] = maps[i].pow(e)
            return cache[key]

        total = Poly.zero(self.field, out_arity)
        for exps, c in self.terms.items():
            term = Poly.constant(self.field, out_arity, c)
            for i, e in enumerate(exps):
                if e:
                    term = term * var_power(i, e)
            total = total + term
        return total


# ---------------------------------------------------------------------------
# Univariate polynomials over GF(q): elements of P_{q,n}, and the F of the
# general-image construction.
# ---------------------------------------------------------------------------

class UPoly:
    """Univariate polynomial, coefficients low-to-high, trailing nonzero."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs):
        coeffs = [field.check(c) for c in coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self.field = field
        self.coeffs = tuple(coeffs)

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_DEGREE

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        return (isinstance(other, UPoly) and self.field == other.field
                and self.coeffs == other.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        f = self.field
        bits = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            cs = f.pretty(c)
            if i == 0:
                bits.append(cs)
            else:
                var = "T" if i == 1 else f"T^{i}"
                bits.append(var if cs == "1" else f"({cs})*{var}")
        return " + ".join(bits)

    def __add__(self, other: "UPoly") -> "UPoly":
        self.field.check_same(other.field)
        f = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        out = []
        for i in range(n):
            a = self.coeffs[i] if i < len(self.coeffs) else 0
            b = other.coeffs[i] if i < len(other.coeffs) else 0
            out.append(f.add(a, b))
        return UPoly(f, out)

    def __mul__(self, other: "UPoly") -> "UPoly":
        self.field.check_same(other.field)
        f = self.field
        if self.is_zero() or other.is_zero():
            return UPoly(f, [])
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] = f.add(out[i + j], f.mul(a, b))
        return UPoly(f, out)

    def pow(self, e: int) -> "UPoly":
        result = UPoly(self.field, [1])
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def evaluate(self, x: int) -> int:
        f = self.field
        total = 0
        for c in reversed(self.coeffs):
            total = f.add(f.mul(total, x), c)
        return total


# ---------------------------------------------------------------------------
# Symbolic expansion of (a_0 + a_1 T + ... + a_{m-1} T^{m-1})^k.
# ---------------------------------------------------------------------------

def _tpoly_mul(field: Field, u: list[Poly], v: list[Poly]) -> list[Poly]:
    """Convolution of T-polynomials whose coefficients are Poly values."""
    arity = u[0].arity
    out = [Poly.zero(field, arity) for _ in range(len(u) + len(v) - 1)]
    for i, a in enumerate(u):
        if a.is_zero():
            continue
        for j, b in enumerate(v):
            if b.is_zero():
                continue
            out[i + j] = out[i + j] + a * b
    return out


def univariate_pow_expand(field: Field, m: int, k: int, n: int) -> list[Poly]:
    """Coefficient polynomials g_0, ..., g_{n-1} of (sum a_i T^i)^k.

    Uses the base-q digit factorisation k = b_0 + b_1 q + ... together with
    p(T)^(q^j) = sum_i a_i^(q^j) T^(i q^j), where the exponent q^j on the
    F_q-valued symbol a_i reduces to 1.  Every monomial of every g_i is then
    a product of at most D_q(k) = sum(b_j) symbols, so deg g_i <= D_q(k).
    """
    if k < 1 or m < 1 or n < 1:
        raise ContractError("need k >= 1, m >= 1, n >= 1")
    if (m - 1) * k >= n:
        raise ContractError(
            f"truncation loss: (m-1)*k = {(m - 1) * k} >= n = {n}")
    q = field.q
    digits = []
    kk = k
    while kk:
        digits.append(kk % q)
        kk //= q
    result = [Poly.constant(field, m, 1)]
    qj = 1
    for b in digits:
        if b:
            base = [Poly.zero(field, m) for _ in range((m - 1) * qj + 1)]
            for i in range(m):
                base[i * qj] = Poly.variable(field, m, i)
            for _ in range(b):
                result = _tpoly_mul(field, result, base)
        qj *= q
    if len(result) > n:
        raise ContractError("internal truncation check failed")  # pragma: no cover
    result.extend(Poly.zero(field, m) for _ in range(n - len(result)))
    return result


# ---------------------------------------------------------------------------
# Text formats.  Multivariate: one term per line, "<coeff> : <e1> <e2> ...",
# coefficient as a base-p tuple like "1,0", lines in graded-lex order, '#'
# comments allowed.  Univariate: "q=<q>" header then one line of
# coefficients low-to-high.
# ---------------------------------------------------------------------------

def poly_to_text(poly: Poly) -> str:
    lines = []
    for exps, c in poly.sorted_terms():
        lines.append(poly.field.format_element(c) + " : "
                     + " ".join(str(e) for e in exps))
    return "\n".join(lines) + ("\n" if lines else "")

def poly_from_text(field: Field, arity: int, text: str) -> Poly:
    items = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ContractError(f"bad polynomial line {raw!r}")
        coeff_part, exp_part = line.split(":", 1)
        coeff = field.parse_element(coeff_part)
        exps = tuple(int(t) for t in exp_part.split())
        if len(exps) != arity:
            raise ContractError(
                f"expected {arity} exponents, got {len(exps)} in {raw!r}")
        items.append((exps, coeff))
    return Poly.from_terms(field, arity, items)


def upoly_to_text(poly: UPoly) -> str:
    f = poly.field
    coeffs = poly.coeffs if poly.coeffs else (0,)
    return (f"q={f.q}\n"
            + " ".join(f.format_element(c) for c in coeffs) + "\n")


def upoly_from_text(field: Field, text: str) -> UPoly:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if len(lines) != 2 or not lines[0].startswith("q="):
        raise ContractError("univariate file needs a q= header and one coefficient line")
    q = int(lines[0][2:])
    if q != field.q:
        raise FieldMismatchError(f"file is over GF({q}), expected GF({field.q})")
    coeffs = [field.parse_element(tok) for tok in lines[1].split()]
    return UPoly(field, coeffs)


def degree_at_most(deg, bound) -> bool:
    """Compare a possibly NEG_DEGREE degree against an int/Fraction bound."""
    if deg == NEG_DEGREE:
        return True
    return Fraction(deg) <= Fraction(bound)
