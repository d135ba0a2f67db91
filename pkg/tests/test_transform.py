import itertools

import numpy as np
import pytest

from ffsets import Poly, analyze, field_from_q, kernel_orthogonality, sigma, synthesize
from ffsets.errors import ContractError, FieldMismatchError
from ffsets.transform import (FunctionTable, analyze_dense, analyze_direct_dense,
                              poly_from_dense, poly_to_dense, sigma_matrix,
                              synthesize_dense)


def slow_analyze(table):
    """Triple-loop double sum straight from the coefficient formula."""
    f = table.field
    n = table.arity
    terms = {}
    for alpha in itertools.product(range(f.q), repeat=n):
        acc = 0
        for i, x in enumerate(itertools.product(range(f.q), repeat=n)):
            # enumeration order: x[0] least significant in the table index
            idx = 0
            for c in reversed(x):
                idx = idx * f.q + c
            v = int(table.values[idx])
            for a, xc in zip(alpha, x):
                v = f.mul(v, sigma(f, a, xc))
            acc = f.add(acc, v)
        if acc:
            terms[alpha] = acc
    return Poly(f, n, terms)


def test_sigma_examples():
    f3 = field_from_q(3)
    assert all(sigma(f3, 2, x) == 2 for x in f3.elements())
    f2 = field_from_q(2)
    assert sigma(f2, 0, 0) == 1 and sigma(f2, 0, 1) == 0
    f5 = field_from_q(5)
    assert sigma(f5, 4, 2) == 4
    with pytest.raises(ContractError):
        sigma(f3, 3, 0)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 8, 9])
def test_kernel_orthogonality_identity(q):
    f = field_from_q(q)
    assert np.array_equal(kernel_orthogonality(f), np.eye(q, dtype=f.dtype))


def test_analyze_indicator_1d():
    # the indicator of 0 is 1 - x^(q-1)
    f = field_from_q(2)
    t = FunctionTable(f, 1, [1, 0])
    p = analyze(t)
    assert p == Poly.from_terms(f, 1, [((0,), 1), ((1,), 1)])
    f5 = field_from_q(5)
    p5 = Poly.from_terms(f5, 1, [((0,), 1), ((4,), f5.neg(1))])
    assert np.array_equal(synthesize(p5).values, np.array([1, 0, 0, 0, 0]))


def test_analyze_zero_and_constant():
    f = field_from_q(3)
    assert analyze(FunctionTable(f, 2, np.zeros(9))).is_zero()
    c = FunctionTable(f, 2, np.full(9, 2))
    assert analyze(c) == Poly.constant(f, 2, 2)
    assert np.array_equal(synthesize(Poly.constant(f, 2, 2)).values, c.values)


def test_roundtrip_random(standard_fields, rng):
    shapes = [(2, 1), (2, 4), (2, 8), (3, 3), (4, 2), (5, 2), (8, 1), (9, 1)]
    for q, n in shapes:
        f = field_from_q(q)
        for _ in range(10):
            t = FunctionTable.random(f, n, rng)
            p = analyze(t)
            assert synthesize(p) == t
            # parallel dense route agrees
            coeffs = analyze_dense(f, n, t.values)
            assert poly_from_dense(f, n, coeffs) == p
            assert np.array_equal(synthesize_dense(f, n, coeffs), t.values)


def test_roundtrip_delta_basis_exhaustive():
    # linearity: identity on every delta function implies identity everywhere
    for q, n in [(2, 3), (3, 2), (4, 2), (5, 1)]:
        f = field_from_q(q)
        for i in range(q ** n):
            vals = np.zeros(q ** n, dtype=f.dtype)
            vals[i] = 1
            t = FunctionTable(f, n, vals)
            assert synthesize(analyze(t)) == t


def test_axis_equals_direct_oracle(rng):
    for q, n in [(2, 5), (3, 3), (4, 2), (5, 2), (9, 1)]:
        f = field_from_q(q)
        for _ in range(8):
            t = FunctionTable.random(f, n, rng)
            assert np.array_equal(analyze_dense(f, n, t.values),
                                  analyze_direct_dense(f, n, t.values))


def test_axis_equals_slow_triple_loop(rng):
    for q, n in [(2, 2), (3, 2), (4, 1), (5, 1)]:
        f = field_from_q(q)
        t = FunctionTable.random(f, n, rng)
        assert analyze(t) == slow_analyze(t)


def test_analyze_roundtrip_poly_side(rng):
    # analyze(synthesize(P)) = P on reduced polynomials
    f = field_from_q(3)
    for _ in range(10):
        coeffs = rng.integers(0, 3, size=27).astype(f.dtype)
        p = poly_from_dense(f, 3, coeffs)
        assert analyze(synthesize(p)) == p


def test_degree_support_duality():
    # indicator of the origin in n coordinates has full degree (q-1)n
    for q, n in [(2, 3), (3, 2)]:
        f = field_from_q(q)
        vals = np.zeros(q ** n, dtype=f.dtype)
        vals[0] = 1
        p = analyze(FunctionTable(f, n, vals))
        assert p.degree == (q - 1) * n
        expect = Poly.constant(f, 1, 1) + Poly.monomial(f, 1, (q - 1,), f.neg(1))
        prod = Poly.constant(f, n, 1)
        for i in range(n):
            prod = prod * expect.substitute([Poly.variable(f, n, i)])
        assert p == prod


def test_sigma_matrix_rows():
    f = field_from_q(4)
    k = sigma_matrix(f)
    for a in range(4):
        for x in range(4):
            assert int(k[a, x]) == sigma(f, a, x)


def test_table_file_roundtrip(rng):
    for q, n in [(2, 3), (4, 2)]:
        f = field_from_q(q)
        t = FunctionTable.random(f, n, rng)
        assert FunctionTable.from_text(f, t.to_text()) == t
    f = field_from_q(2)
    with pytest.raises(FieldMismatchError):
        FunctionTable.from_text(f, "q=3 n=1\n0\n1\n2\n")
    with pytest.raises(ContractError):
        FunctionTable(f, 1, [0, 1, 0])


def test_table_indexing():
    f = field_from_q(3)
    t = FunctionTable(f, 2, np.arange(9) % 3)
    # point (x1, x2) lives at index x1 + 3 x2
    assert t[(1, 2)] == (1 + 3 * 2) % 3
    assert t[4] == 1


def test_poly_dense_roundtrip(rng):
    f = field_from_q(4)
    coeffs = rng.integers(0, 4, size=64).astype(f.dtype)
    p = poly_from_dense(f, 3, coeffs)
    assert np.array_equal(poly_to_dense(p), coeffs)
