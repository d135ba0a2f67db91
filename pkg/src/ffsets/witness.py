"""Witness polynomials supported on the image of a polynomial map.

Given a map Phi = (phi_1, ..., phi_n): F_q^m -> F_q^n of total degree <= d
whose fiber over 0 has cardinality coprime to q, the function
f(x) = |Phi^(-1)(x)| reduced into the prime subfield has a polynomial
representation P with

    (1) deg P <= (q-1)(n - m/d),
    (2) P(x) = 0 for x outside im(Phi),
    (3) P(0) != 0.

`build_witness` constructs P by transforming the fiber-counting table and
verifies all three properties (support checked exhaustively at desk scale).
Two map constructors are provided: coordinate polynomials of k-th powers of
degree < m polynomials, and of F(b(T)) for a general F with F(0) = 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction

import numpy as np

from .errors import (ContractError, FieldMismatchError, HypothesisError,
                     InternalConsistencyError, ResourceGuardError)
from .field import Field, parse_field_spec, format_field_spec, point_coords
from .polyring import (Poly, UPoly, poly_from_text, poly_to_text,
                       univariate_pow_expand)
from .transform import FunctionTable, analyze_dense, poly_from_dense, synthesize_dense

FIBER_CAP = 1 << 24    # largest q^m enumerated
SUPPORT_CAP = 1 << 20  # largest q^n for exhaustive support checking


class PolynomialMap:
    """A polynomial map F_q^m -> F_q^n given by n reduced m-variable polys."""

    __slots__ = ("field", "m", "n", "components", "degree")

    def __init__(self, field: Field, m: int, n: int, components: list[Poly]):
        if len(components) != n:
            raise ContractError(f"expected {n} components, got {len(components)}")
        for comp in components:
            field.check_same(comp.field)
            if comp.arity != m:
                raise FieldMismatchError(
                    f"component arity {comp.arity} != m = {m}")
        self.field = field
        self.m = m
        self.n = n
        self.components = list(components)
        degs = [c.degree for c in components if not c.is_zero()]
        self.degree = int(max(degs)) if degs else 0

    def evaluate(self, point) -> tuple[int, ...]:
        return tuple(c.evaluate(point) for c in self.components)

    def image_indices(self) -> np.ndarray:
        """Phi(a) as point indices for every a in F_q^m, in input order."""
        q = self.field.q
        total = q ** self.m
        if total > FIBER_CAP:
            raise ResourceGuardError(f"q^m = {total} exceeds {FIBER_CAP}")
        pts = point_coords(q, self.m, np.arange(total))
        out = np.zeros(total, dtype=np.int64)
        for i in range(self.n - 1, -1, -1):
            out = out * q + self.components[i].evaluate_batch(pts)
        return out

    def to_text(self) -> str:
        lines = [format_field_spec(self.field),
                 f"q={self.field.q} n={self.n} m={self.m}"]
        for i, comp in enumerate(self.components):
            lines.append(f"component {i}")
            body = poly_to_text(comp)
            if body:
                lines.append(body.rstrip("\n"))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "PolynomialMap":
        lines = [ln.split("#", 1)[0].rstrip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln.strip()]
        if len(lines) < 2:
            raise ContractError("map file needs a field-spec line and a header")
        fld = parse_field_spec(lines[0])
        header = dict(tok.split("=", 1) for tok in lines[1].split())
        q, n, m = int(header["q"]), int(header["n"]), int(header["m"])
        if q != fld.q:
            raise FieldMismatchError("header q disagrees with field spec")
        blocks: list[list[str]] = []
        for ln in lines[2:]:
            if ln.strip().startswith("component"):
                blocks.append([])
            elif blocks:
                blocks[-1].append(ln)
            else:
                raise ContractError(f"term line before any component: {ln!r}")
        if len(blocks) != n:
            raise ContractError(f"expected {n} component blocks, got {len(blocks)}")
        comps = [poly_from_text(fld, m, "\n".join(b)) for b in blocks]
        return cls(fld, m, n, comps)


@dataclass
class FiberCount:
    """Fiber cardinalities of a map, both exact and reduced mod p."""
    table: FunctionTable          # counts mod p, embedded in the prime subfield
    counts: np.ndarray            # exact integer counts, length q^n
    count_at_zero: int


def fiber_counting_function(phi: PolynomialMap) -> FiberCount:
    """Tabulate x -> |Phi^(-1)(x)| over F_q^n.

    The table holds the counts mod p (the value of the count as an element
    of the prime subfield); the exact integer counts ride along for image
    and conservation checks.
    """
    q = phi.field.q
    space = q ** phi.n
    if space > FIBER_CAP:
        raise ResourceGuardError(f"q^n = {space} exceeds {FIBER_CAP}")
    image = phi.image_indices()
    counts = np.bincount(image, minlength=space)
    if int(counts.sum()) != q ** phi.m:
        raise InternalConsistencyError("fiber counts do not sum to q^m")
    table = FunctionTable(phi.field, phi.n, counts % phi.field.p)
    return FiberCount(table=table, counts=counts, count_at_zero=int(counts[0]))


def _weights_of_indices(q: int, n: int, idx: np.ndarray) -> np.ndarray:
    """Total degree |alpha| of each coefficient index (base-q digit sum)."""
    idx = idx.astype(np.int64)
    w = np.zeros_like(idx)
    for _ in range(n):
        w += idx % q
        idx //= q
    return w


@dataclass
class WitnessReport:
    """The witness polynomial plus the verification of its three properties."""
    map: PolynomialMap
    coefficients: np.ndarray          # dense coefficient array, length q^n
    fiber_count_at_zero: int          # exact integer, not reduced mod p
    degree: int
    degree_bound_rhs: Fraction        # (q-1)(n - m/d), exact rational
    degree_ok: bool
    support_ok: bool | None           # None when the exhaustive check was skipped
    nonzero_at_zero: bool
    image: np.ndarray | None          # sorted image indices, desk scale only
    _poly: Poly | None = dataclass_field(default=None, repr=False)

    @property
    def all_ok(self) -> bool:
        return self.degree_ok and self.support_ok is not False and self.nonzero_at_zero

    def polynomial(self) -> Poly:
        """Sparse form of the witness; materialised on first use."""
        if self._poly is None:
            f = self.map.field
            self._poly = poly_from_dense(f, self.map.n, self.coefficients)
        return self._poly

    def failing_properties(self) -> list[str]:
        out = []
        if not self.degree_ok:
            out.append("degree-bound")
        if self.support_ok is False:
            out.append("support")
        if not self.nonzero_at_zero:
            out.append("nonzero-at-zero")
        return out


def build_witness(phi: PolynomialMap) -> WitnessReport:
    """Construct and verify the witness polynomial of a map.

    Raises HypothesisError when |Phi^(-1)(0)| is divisible by p, in which
    case no witness with P(0) != 0 exists by this construction.
    """
    f = phi.field
    q = f.q
    fibers = fiber_counting_function(phi)
    count0 = fibers.count_at_zero
    if count0 % f.p == 0:
        raise HypothesisError(
            f"fiber count at 0 is {count0} = 0 mod {f.p}; not coprime to q")
    coeffs = analyze_dense(f, phi.n, fibers.table.values)

    if phi.degree == 0:
        raise ContractError("constant map has no degree bound; nothing to witness")
    rhs = Fraction(q - 1) * (Fraction(phi.n) - Fraction(phi.m, phi.degree))
    nz = np.nonzero(coeffs)[0]
    deg = int(_weights_of_indices(q, phi.n, nz).max()) if nz.size else 0
    degree_ok = Fraction(deg) <= rhs

    support_ok: bool | None = None
    image = None
    if q ** phi.n <= SUPPORT_CAP:
        values = synthesize_dense(f, phi.n, coeffs)
        if not np.array_equal(values, fibers.table.values):
            raise InternalConsistencyError("transform round trip failed")
        support_ok = bool(np.all(values[fibers.counts == 0] == 0))
        image = np.nonzero(fibers.counts)[0]
    # P(0) is the constant coefficient: every other monomial vanishes at 0.
    nonzero_at_zero = int(coeffs[0]) != 0

    return WitnessReport(
        map=phi, coefficients=coeffs, fiber_count_at_zero=count0,
        degree=deg, degree_bound_rhs=rhs, degree_ok=bool(degree_ok),
        support_ok=support_ok, nonzero_at_zero=nonzero_at_zero, image=image)


def kth_power_map(field: Field, n: int, k: int) -> PolynomialMap:
    """The map whose image is the set of k-th powers inside P_{q,n}.

    Source dimension m = floor((n-1)/k) + 1 is the largest with no
    truncation; component i is the T^i coefficient of (a_0 + ... +
    a_{m-1} T^(m-1))^k, so the total degree never exceeds the base-q digit
    sum of k.
    """
    if n < 1 or k < 2:
        raise ContractError("kth_power_map needs n >= 1 and k >= 2")
    m = (n - 1) // k + 1
    return PolynomialMap(field, m, n, univariate_pow_expand(field, m, k, n))


def composed_map(field: Field, n: int, f_poly: UPoly) -> PolynomialMap:
    """The map whose image is {F(b(T)) mod T^n : deg b < m} for F = f_poly.

    Requires F(0) = 0 so that the zero fiber consists of constant inputs.
    Each b^k' factor is expanded through the digit factorisation, keeping
    component degrees at most max over the digit sums of the occurring k'.
    """
    field.check_same(f_poly.field)
    if f_poly.is_zero() or f_poly.degree < 1:
        raise ContractError("F must have degree >= 1")
    if f_poly.coeffs[0] != 0:
        raise ContractError("F must have zero constant term")
    k = f_poly.degree
    m = (n - 1) // k + 1
    comps = [Poly.zero(field, m) for _ in range(n)]
    for kp, c in enumerate(f_poly.coeffs):
        if kp == 0 or c == 0:
            continue
        g = univariate_pow_expand(field, m, kp, n)
        comps = [acc + gi.scale(c) for acc, gi in zip(comps, g)]
    return PolynomialMap(field, m, n, comps)


def check_coprimality(field: Field, f_poly: UPoly) -> tuple[int, bool]:
    """Count the roots of F in F_q; ok means the count is nonzero mod p."""
    field.check_same(f_poly.field)
    if f_poly.is_zero() or f_poly.coeffs[0] != 0:
        raise ContractError("F must be nonzero with F(0) = 0")
    root_count = sum(1 for x in field.elements() if f_poly.evaluate(x) == 0)
    return root_count, root_count % field.p != 0
