"""Exact arithmetic in GF(q) for q = p^r.

Elements are plain Python ints in {0, ..., q-1}.  The base-p digits of the
int are the coordinates of the element in the polynomial basis relative to
the modulus: index sum(c_j * p**j) represents c_{r-1} t^{r-1} + ... + c_1 t
+ c_0.  This makes the canonical enumeration order 0, 1, ..., q-1 (so GF(4)
enumerates as 0, 1, t, t+1) and makes addition digitwise mod p.

Points of F_q^n are also plain ints: the point (x_1, ..., x_n) has index
sum(x_i * q**(i-1)).  Under the usual identification of F_q^n with the
polynomials of degree < n, the polynomial c_0 + c_1 T + ... corresponds to
the integer sum(c_i * q**i).  Since q = p^r, a point index is just a base-p
integer with n*r digits, so pointwise addition is digitwise mod p as well.

Scalar operations work for any q up to the desk-scale cap 2**20.  The
vectorised helpers (lookup tables, batched sums) require q <= 4096; they are
built lazily on first use.
"""

from __future__ import annotations

import functools
import math

import numpy as np

from .errors import ConstructionError, FieldMismatchError, ResourceGuardError

MAX_Q = 1 << 20
TABLE_CAP = 1 << 12


def is_prime(n: int) -> bool:
    """Trial-division primality test; fine for the desk-scale cap."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# Polynomial helpers over GF(p), used only for modulus handling and scalar
# multiplication.  Coefficient tuples are low-to-high, no trailing zeros
# required.
# ---------------------------------------------------------------------------

def _gfp_divmod(p: int, a: list[int], b: list[int]) -> tuple[list[int], list[int]]:
    """Long division of coefficient lists over GF(p); b must be nonzero."""
    a = list(a)
    db = len(b) - 1
    while len(b) > 1 and b[-1] == 0:
        b = b[:-1]
        db -= 1
    inv_lead = pow(b[-1], p - 2, p) if p > 2 else b[-1]
    quot = [0] * max(len(a) - db, 1)
    while len(a) > db and any(a):
        da = len(a) - 1
        if a[da] == 0:
            a.pop()
            continue
        if da < db:
            break
        c = (a[da] * inv_lead) % p
        quot[da - db] = c
        for i, bc in enumerate(b):
            a[da - db + i] = (a[da - db + i] - c * bc) % p
        a.pop()
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return quot, a


def _gfp_is_irreducible(p: int, coeffs: tuple[int, ...]) -> bool:
    """Exhaustive trial division by every monic polynomial of degree <= r/2."""
    r = len(coeffs) - 1
    for d in range(1, r // 2 + 1):
        for idx in range(p ** d):
            div = [0] * (d + 1)
            v = idx
            for j in range(d):
                div[j] = v % p
                v //= p
            div[d] = 1
            _, rem = _gfp_divmod(p, list(coeffs), div)
            if len(rem) == 1 and rem[0] == 0:
                return False
    return True


def lowest_irreducible(p: int, r: int) -> tuple[int, ...]:
    """First monic irreducible of degree r in the enumeration order of the
    lower-coefficient integer (ties the shipped default moduli together)."""
    for idx in range(p ** r):
        coeffs = [0] * (r + 1)
        v = idx
        for j in range(r):
            coeffs[j] = v % p
            v //= p
        coeffs[r] = 1
        if _gfp_is_irreducible(p, tuple(coeffs)):
            return tuple(coeffs)
    raise ConstructionError(f"no irreducible of degree {r} over GF({p})")  # pragma: no cover


# Shipped defaults (lowest lexicographic irreducible, low-to-high coeffs).
DEFAULT_MODULI: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1, 1),          # t^2 + t + 1
    (2, 3): (1, 1, 0, 1),       # t^3 + t + 1
    (2, 4): (1, 1, 0, 0, 1),    # t^4 + t + 1
    (3, 2): (1, 0, 1),          # t^2 + 1
    (3, 3): (1, 2, 0, 1),       # t^3 + 2t + 1
    (5, 2): (2, 0, 1),          # t^2 + 2
}


class Field:
    """The finite field GF(p^r) with explicit modulus for r > 1.

    Immutable after construction; all operations are pure.  Elements are
    ints in range(q); see the module docstring for the encoding.
    """

    def __init__(self, p: int, r: int = 1, modulus: tuple[int, ...] | None = None):
        if not isinstance(p, int) or not is_prime(p):
            raise ConstructionError(f"p = {p} is not prime")
        if not isinstance(r, int) or r < 1:
            raise ConstructionError(f"r = {r} must be a positive integer")
        q = p ** r
        if q > MAX_Q:
            raise ConstructionError(f"q = {q} exceeds the desk-scale cap 2^20")
        self.p = p
        self.r = r
        self.q = q
        if r == 1:
            if modulus is not None:
                raise ConstructionError("modulus only applies when r > 1")
            self.modulus = None
        else:
            if modulus is None:
                modulus = DEFAULT_MODULI.get((p, r)) or lowest_irreducible(p, r)
            modulus = tuple(int(c) for c in modulus)
            if len(modulus) != r + 1 or modulus[-1] != 1:
                raise ConstructionError(
                    f"modulus must be monic of degree {r}, got {modulus}")
            if any(c < 0 or c >= p for c in modulus):
                raise ConstructionError("modulus coefficients out of range")
            if not _gfp_is_irreducible(p, modulus):
                raise ConstructionError(
                    f"modulus {modulus} is reducible over GF({p})")
            self.modulus = modulus

    # -- identity ----------------------------------------------------------

    def _key(self):
        return (self.p, self.r, self.modulus)

    def __eq__(self, other):
        return isinstance(other, Field) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        if self.r == 1:
            return f"Field(p={self.p})"
        mod = ",".join(str(c) for c in self.modulus)
        return f"Field(p={self.p}, r={self.r}, modulus={mod})"

    def check_same(self, other: "Field") -> None:
        if self != other:
            raise FieldMismatchError(f"{self!r} vs {other!r}")

    # -- element plumbing ----------------------------------------------------

    def check(self, a: int) -> int:
        if not isinstance(a, (int, np.integer)) or not 0 <= a < self.q:
            raise FieldMismatchError(f"{a!r} is not an element of {self!r}")
        return int(a)

    def elements(self) -> range:
        """All q elements, 0 first, in the canonical index order."""
        return range(self.q)

    def coeffs(self, a: int) -> tuple[int, ...]:
        """Polynomial-basis coordinates (c_{r-1}, ..., c_0), high degree first."""
        out = []
        for _ in range(self.r):
            out.append(a % self.p)
            a //= self.p
        return tuple(reversed(out))

    def from_coeffs(self, coeffs) -> int:
        if len(coeffs) != self.r:
            raise FieldMismatchError(f"need {self.r} coefficients, got {coeffs!r}")
        a = 0
        for c in coeffs:
            if not 0 <= c < self.p:
                raise FieldMismatchError(f"coefficient {c} out of range")
            a = a * self.p + int(c)
        return a

    def format_element(self, a: int) -> str:
        """Comma-joined coefficient tuple, e.g. '1,0' for t in GF(4)."""
        return ",".join(str(c) for c in self.coeffs(self.check(a)))

    def parse_element(self, text: str) -> int:
        parts = text.strip().split(",")
        try:
            coeffs = [int(x) for x in parts]
        except ValueError as exc:
            raise FieldMismatchError(f"bad element literal {text!r}") from exc
        return self.from_coeffs(coeffs)

    def pretty(self, a: int) -> str:
        """Human-readable form: 0, 1, t, t+1, 2t+2, ..."""
        a = self.check(a)
        if self.r == 1:
            return str(a)
        parts = []
        for j in range(self.r - 1, -1, -1):
            c = (a // self.p ** j) % self.p
            if c == 0:
                continue
            if j == 0:
                parts.append(str(c))
            else:
                var = "t" if j == 1 else f"t^{j}"
                parts.append(var if c == 1 else f"{c}{var}")
        return "+".join(parts) if parts else "0"

    # -- scalar arithmetic ---------------------------------------------------

    def add(self, a: int, b: int) -> int:
        a, b = self.check(a), self.check(b)
        if self.r == 1:
            return (a + b) % self.p
        out, scale = 0, 1
        for _ in range(self.r):
            out += ((a + b) % self.p) * scale
            a //= self.p
            b //= self.p
            scale *= self.p
        return out

    def neg(self, a: int) -> int:
        a = self.check(a)
        if self.r == 1:
            return (-a) % self.p
        out, scale = 0, 1
        for _ in range(self.r):
            out += ((-a) % self.p) * scale
            a //= self.p
            scale *= self.p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        a, b = self.check(a), self.check(b)
        if self.r == 1:
            return (a * b) % self.p
        p = self.p
        da = [(a // p ** j) % p for j in range(self.r)]
        db = [(b // p ** j) % p for j in range(self.r)]
        prod = [0] * (2 * self.r - 1)
        for i, ca in enumerate(da):
            if ca:
                for j, cb in enumerate(db):
                    prod[i + j] = (prod[i + j] + ca * cb) % p
        # reduce by the monic modulus
        for deg in range(len(prod) - 1, self.r - 1, -1):
            c = prod[deg]
            if c:
                prod[deg] = 0
                for j in range(self.r):
                    prod[deg - self.r + j] = (prod[deg - self.r + j] - c * self.modulus[j]) % p
        out = 0
        for j in range(self.r - 1, -1, -1):
            out = out * p + prod[j]
        return out

    def pow(self, a: int, e: int) -> int:
        """a**e by square-and-multiply, with the convention 0**0 = 1."""
        a = self.check(a)
        if e < 0:
            raise ValueError("negative exponent; use inv")
        result = 1
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, a: int) -> int:
        a = self.check(a)
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in " + repr(self))
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    # -- lazy lookup tables for vectorised paths ------------------------------

    @functools.cached_property
    def dtype(self):
        return np.uint8 if self.q <= 256 else np.uint16

    def _require_tables(self):
        if self.q > TABLE_CAP:
            raise ResourceGuardError(
                f"vectorised operations need q <= {TABLE_CAP}, got q = {self.q}")

    @functools.cached_property
    def _generator(self) -> int:
        """A multiplicative generator, found by order testing."""
        factors = _prime_factors(self.q - 1) if self.q > 2 else []
        for g in range(1, self.q):
            if all(self.pow(g, (self.q - 1) // f) != 1 for f in factors):
                return g
        raise ConstructionError("no generator found")  # pragma: no cover

    @functools.cached_property
    def exp_log_tables(self) -> tuple[np.ndarray, np.ndarray]:
        self._require_tables()
        exp = np.zeros(self.q - 1, dtype=self.dtype)
        log = np.zeros(self.q, dtype=np.int64)
        g = self._generator
        x = 1
        for i in range(self.q - 1):
            exp[i] = x
            log[x] = i
            x = self.mul(x, g)
        return exp, log

    @functools.cached_property
    def add_table(self) -> np.ndarray:
        self._require_tables()
        idx = np.arange(self.q, dtype=np.int64)
        a = idx[:, None]
        b = idx[None, :]
        out = np.zeros((self.q, self.q), dtype=np.int64)
        scale = 1
        for _ in range(self.r):
            out += ((a + b) % self.p) * scale
            a = a // self.p
            b = b // self.p
            scale *= self.p
        return out.astype(self.dtype)

    @functools.cached_property
    def neg_table(self) -> np.ndarray:
        self._require_tables()
        a = np.arange(self.q, dtype=np.int64)
        out = np.zeros(self.q, dtype=np.int64)
        scale = 1
        for _ in range(self.r):
            out += ((-a) % self.p) * scale
            a = a // self.p
            scale *= self.p
        return out.astype(self.dtype)

    @functools.cached_property
    def sub_table(self) -> np.ndarray:
        return self.add_table[:, self.neg_table]

    @functools.cached_property
    def mul_table(self) -> np.ndarray:
        self._require_tables()
        exp, log = self.exp_log_tables
        out = np.zeros((self.q, self.q), dtype=self.dtype)
        if self.q > 1:
            nz = np.arange(1, self.q)
            s = (log[nz][:, None] + log[nz][None, :]) % (self.q - 1)
            out[1:, 1:] = exp[s]
        return out

    @functools.cached_property
    def inv_table(self) -> np.ndarray:
        """inv_table[0] is a 0 sentinel; scalar inv raises instead."""
        exp, log = self.exp_log_tables
        out = np.zeros(self.q, dtype=self.dtype)
        nz = np.arange(1, self.q)
        out[1:] = exp[(-log[nz]) % (self.q - 1)]
        return out

    @functools.cached_property
    def pow_table(self) -> np.ndarray:
        """pow_table[x, e] = x**e for 0 <= e <= q-1, with 0**0 = 1."""
        exp, log = self.exp_log_tables
        out = np.zeros((self.q, self.q), dtype=self.dtype)
        out[0, 0] = 1
        if self.q > 1:
            e = np.arange(self.q, dtype=np.int64)
            nz = np.arange(1, self.q)
            out[1:, :] = exp[(log[nz][:, None] * e[None, :]) % (self.q - 1)]
        return out

    # -- vectorised element arrays -------------------------------------------

    def vec_add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.add_table[a, b]

    def vec_sub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.sub_table[a, b]

    def vec_mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.mul_table[a, b]

    def vec_neg(self, a: np.ndarray) -> np.ndarray:
        return self.neg_table[a]

    def vec_sum(self, arr: np.ndarray, axis: int) -> np.ndarray:
        """Field sum along an axis: per-digit integer sums reduced mod p."""
        if self.r == 1:
            return (arr.astype(np.int64).sum(axis=axis) % self.p).astype(self.dtype)
        work = arr.astype(np.int64)
        out = 0
        scale = 1
        for _ in range(self.r):
            out = out + ((work % self.p).sum(axis=axis) % self.p) * scale
            work //= self.p
            scale *= self.p
        return out.astype(self.dtype)


def gf_matmul(field: Field, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product over GF(q) on index arrays, chunked to bound memory."""
    a = np.asarray(a, dtype=field.dtype)
    b = np.asarray(b, dtype=field.dtype)
    s, t = a.shape
    t2, u = b.shape
    if t != t2:
        raise FieldMismatchError(f"shape mismatch {a.shape} @ {b.shape}")
    out = np.zeros((s, u), dtype=field.dtype)
    if t == 0:
        return out
    chunk = max(1, (1 << 24) // max(1, s * t))
    mul_t = field.mul_table
    for lo in range(0, u, chunk):
        hi = min(u, lo + chunk)
        prod = mul_t[a[:, :, None], b[None, :, lo:hi]]
        out[:, lo:hi] = field.vec_sum(prod, axis=1)
    return out


def field_from_q(q: int, modulus: tuple[int, ...] | None = None) -> Field:
    """Build GF(q) from a prime power q, using the default modulus."""
    if not isinstance(q, int) or q < 2:
        raise ConstructionError(f"q = {q!r} is not a prime power >= 2")
    p = min(_prime_factors(q))
    r = 0
    qq = q
    while qq % p == 0:
        qq //= p
        r += 1
    if qq != 1:
        raise ConstructionError(f"q = {q} is not a prime power")
    return Field(p, r, modulus if r > 1 else None)


# ---------------------------------------------------------------------------
# Field-spec text format: "p=2 r=2 modulus=1,1,1" (modulus low-to-high,
# omitted when r = 1).
# ---------------------------------------------------------------------------

def format_field_spec(field: Field) -> str:
    if field.r == 1:
        return f"p={field.p} r=1"
    mod = ",".join(str(c) for c in field.modulus)
    return f"p={field.p} r={field.r} modulus={mod}"


def parse_field_spec(text: str) -> Field:
    kv = {}
    for tok in text.split():
        if "=" not in tok:
            raise ConstructionError(f"bad field-spec token {tok!r}")
        k, v = tok.split("=", 1)
        kv[k] = v
    try:
        p = int(kv["p"])
        r = int(kv.get("r", "1"))
    except (KeyError, ValueError) as exc:
        raise ConstructionError(f"bad field spec {text!r}") from exc
    modulus = None
    if "modulus" in kv:
        try:
            modulus = tuple(int(c) for c in kv["modulus"].split(","))
        except ValueError as exc:
            raise ConstructionError(f"bad modulus in {text!r}") from exc
    return Field(p, r, modulus)


# ---------------------------------------------------------------------------
# Points of F_q^n as ints: index = sum(x_i * q**(i-1)).  A point index is a
# base-p integer with n*r digits, so the additive group is digitwise mod p.
# ---------------------------------------------------------------------------

def point_coords(q: int, n: int, idx) -> np.ndarray:
    """Coordinates (x_1, ..., x_n) of point indices; shape (..., n)."""
    idx = np.asarray(idx, dtype=np.int64)
    out = np.empty(idx.shape + (n,), dtype=np.int64)
    for i in range(n):
        out[..., i] = idx % q
        idx = idx // q
    return out


def coords_to_point(q: int, coords) -> np.ndarray:
    coords = np.asarray(coords, dtype=np.int64)
    out = np.zeros(coords.shape[:-1], dtype=np.int64)
    for i in range(coords.shape[-1] - 1, -1, -1):
        out = out * q + coords[..., i]
    return out


def point_add(field: Field, n: int, a, b) -> np.ndarray:
    """Pointwise sum in F_q^n on index arrays (digitwise mod p)."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    out = 0
    scale = 1
    for _ in range(n * field.r):
        out = out + ((a + b) % field.p) * scale
        a = a // field.p
        b = b // field.p
        scale *= field.p
    return np.asarray(out, dtype=np.int64)


def point_neg(field: Field, n: int, a) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    out = 0
    scale = 1
    for _ in range(n * field.r):
        out = out + ((-a) % field.p) * scale
        a = a // field.p
        scale *= field.p
    return np.asarray(out, dtype=np.int64)


def point_sub(field: Field, n: int, a, b) -> np.ndarray:
    return point_add(field, n, a, point_neg(field, n, b))
