"""The F_q-valued transform between function tables and reduced polynomials.

Every function f: F_q^n -> F_q equals a unique reduced polynomial
P_f(x) = sum_alpha c_alpha x^alpha with all exponents <= q-1.  The
coefficients come from the dual kernel

    sigma_a(x) = -x^(q-1-a)  for a > 0,     sigma_0(x) = [x == 0],

via c_alpha = sum_x f(x) * prod_i sigma_{alpha_i}(x_i).  The kernel is
separable, so analysis factorises into n axis passes of a length-q
transform (cost O(n q^(n+1))); the full double sum over (alpha, x) is kept
as an independent cross-check oracle.  Synthesis is the same machinery with
the Vandermonde kernel x^a.

Dense arrays are indexed by point index sum(x_i q^(i-1)); the coefficient
array uses the same convention on alpha.
"""

from __future__ import annotations

import numpy as np

from .errors import ContractError, FieldMismatchError, ResourceGuardError
from .field import Field, point_coords
from .polyring import Poly

DIRECT_KERNEL_CAP = 1 << 22  # q^(2n) cap for materialising the product kernel


class FunctionTable:
    """Dense table of a function F_q^n -> F_q, indexed in point order."""

    __slots__ = ("field", "arity", "values")

    def __init__(self, field: Field, arity: int, values):
        values = np.ascontiguousarray(values, dtype=field.dtype)
        if values.shape != (field.q ** arity,):
            raise ContractError(
                f"table needs q^n = {field.q ** arity} values, got shape {values.shape}")
        if values.size and int(values.max()) >= field.q:
            raise FieldMismatchError("table contains out-of-range values")
        self.field = field
        self.arity = arity
        self.values = values

    @classmethod
    def from_function(cls, field: Field, arity: int, fn) -> "FunctionTable":
        """Tabulate a callable on coordinate tuples (test-scale helper)."""
        pts = point_coords(field.q, arity, np.arange(field.q ** arity))
        vals = [fn(tuple(int(c) for c in row)) for row in pts]
        return cls(field, arity, vals)

    @classmethod
    def random(cls, field: Field, arity: int, rng: np.random.Generator) -> "FunctionTable":
        return cls(field, arity, rng.integers(0, field.q, size=field.q ** arity))

    def __eq__(self, other):
        return (isinstance(other, FunctionTable) and self.field == other.field
                and self.arity == other.arity
                and np.array_equal(self.values, other.values))

    def __getitem__(self, point) -> int:
        if isinstance(point, (int, np.integer)):
            return int(self.values[point])
        idx = 0
        for x in reversed(point):
            idx = idx * self.field.q + self.field.check(x)
        return int(self.values[idx])

    def to_text(self) -> str:
        f = self.field
        lines = [f"q={f.q} n={self.arity}"]
        lines.extend(f.format_element(int(v)) for v in self.values)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, field: Field, text: str) -> "FunctionTable":
        lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        if not lines:
            raise ContractError("empty function-table file")
        header = dict(tok.split("=", 1) for tok in lines[0].split())
        q, n = int(header["q"]), int(header["n"])
        if q != field.q:
            raise FieldMismatchError(f"table is over GF({q}), expected GF({field.q})")
        vals = [field.parse_element(tok) for tok in lines[1:]]
        return cls(field, n, vals)


# ---------------------------------------------------------------------------
# Kernels.
# ---------------------------------------------------------------------------

def sigma(field: Field, a: int, x: int) -> int:
    """The dual kernel value sigma_a(x)."""
    if not 0 <= a <= field.q - 1:
        raise ContractError(f"kernel index a = {a} out of range")
    if a == 0:
        return 1 if x == 0 else 0
    return field.neg(field.pow(x, field.q - 1 - a))

def sigma_matrix(field: Field) -> np.ndarray:
    """Analysis kernel K[a, x] = sigma_a(x) as a q x q table."""
    q = field.q
    out = np.zeros((q, q), dtype=field.dtype)
    for a in range(q):
        for x in range(q):
            out[a, x] = sigma(field, a, x)
    return out


def kernel_orthogonality(field: Field) -> np.ndarray:
    """S[a, b] = sum_x x^b sigma_a(x), computed by direct summation.

    Equals the identity matrix; asserting that is the caller's job.
    """
    q = field.q
    out = np.zeros((q, q), dtype=field.dtype)
    for a in range(q):
        for b in range(q):
            s = 0
            for x in range(q):
                s = field.add(s, field.mul(field.pow(x, b), sigma(field, a, x)))
            out[a, b] = s
    return out


# ---------------------------------------------------------------------------
# Dense transforms.
# ---------------------------------------------------------------------------

def _axis_transform(field: Field, n: int, values: np.ndarray, kern: np.ndarray) -> np.ndarray:
    """Apply out[a] = sum_x kern[a, x] * cur[x] independently along each of
    the n coordinates of a flat length-q^n array."""
    q = field.q
    mul_t = field.mul_table
    cur = values.astype(field.dtype)
    for i in range(n):
        lo = q ** i
        hi = q ** (n - 1 - i)
        block = cur.reshape(hi, q, lo)
        prod = mul_t[kern[None, :, :, None], block[:, None, :, :]]
        cur = np.ascontiguousarray(field.vec_sum(prod, axis=2)).reshape(-1)
    return cur


def analyze_dense(field: Field, n: int, values: np.ndarray) -> np.ndarray:
    """Coefficient array of the reduced polynomial agreeing with `values`."""
    return _axis_transform(field, n, values, sigma_matrix(field))


def synthesize_dense(field: Field, n: int, coeffs: np.ndarray) -> np.ndarray:
    """Pointwise values of the polynomial with the given coefficient array."""
    return _axis_transform(field, n, coeffs, field.pow_table)


def product_kernel(field: Field, n: int) -> np.ndarray:
    """The full q^n x q^n kernel W[alpha, x] = prod_i sigma_{alpha_i}(x_i)."""
    q = field.q
    if q ** (2 * n) > DIRECT_KERNEL_CAP:
        raise ResourceGuardError(
            f"direct kernel needs q^2n <= {DIRECT_KERNEL_CAP}")
    mul_t = field.mul_table
    base = sigma_matrix(field)
    out = base
    size = q
    for _ in range(n - 1):
        out = mul_t[base[:, None, :, None], out[None, :, None, :]]
        size *= q
        out = out.reshape(size, size)
    return out


def analyze_direct_dense(field: Field, n: int, values: np.ndarray) -> np.ndarray:
    """Cross-check oracle: the double sum over (alpha, x), materialised as a
    product-kernel matrix-vector product.  Independent of the axis passes."""
    w = product_kernel(field, n)
    prod = field.mul_table[w, np.asarray(values, dtype=field.dtype)[None, :]]
    return field.vec_sum(prod, axis=1)


# ---------------------------------------------------------------------------
# Poly-facing wrappers.
# ---------------------------------------------------------------------------

def poly_to_dense(poly: Poly, arity: int | None = None) -> np.ndarray:
    n = poly.arity if arity is None else arity
    q = poly.field.q
    out = np.zeros(q ** n, dtype=poly.field.dtype)
    for exps, c in poly.terms.items():
        idx = 0
        for e in reversed(exps):
            idx = idx * q + e
        out[idx] = c
    return out


def poly_from_dense(field: Field, n: int, coeffs: np.ndarray) -> Poly:
    nz = np.nonzero(coeffs)[0]
    exps = point_coords(field.q, n, nz)
    terms = {
        tuple(int(e) for e in exps[i]): int(coeffs[nz[i]])
        for i in range(len(nz))
    }
    return Poly(field, n, terms)


def analyze(table: FunctionTable, method: str = "axis") -> Poly:
    """Reduced polynomial representation of a function table.

    method="axis" is the production path; method="direct" runs the
    double-sum oracle.
    """
    if method == "axis":
        coeffs = analyze_dense(table.field, table.arity, table.values)
    elif method == "direct":
        coeffs = analyze_direct_dense(table.field, table.arity, table.values)
    else:
        raise ContractError(f"unknown analyze method {method!r}")
    return poly_from_dense(table.field, table.arity, coeffs)


def synthesize(poly: Poly) -> FunctionTable:
    """Tabulate a reduced polynomial at every point of F_q^n."""
    dense = poly_to_dense(poly)
    values = synthesize_dense(poly.field, poly.arity, dense)
    return FunctionTable(poly.field, poly.arity, values)
