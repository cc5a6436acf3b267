"""Tests for the exact arithmetic kernel."""

import random
from fractions import Fraction

import pytest

from artifact.exact_core import (
    LaurentSeries,
    NonzeroRemainder,
    Poly,
    QuadExtElem,
    SqrtNotRepresentable,
    VariableContextMismatch,
    ZeroLeading,
    exact_div_linear,
    poly_div_linear_power,
    poly_divmod_linear,
    rat,
    rat_sqrt,
    rat_str,
)

SEED = 42


def _rand_poly(rng, variables, nterms=3, max_exp=3, max_num=9):
    terms = {}
    for _ in range(nterms):
        expo = tuple(rng.randrange(0, max_exp + 1) for _ in variables)
        terms[expo] = Fraction(rng.randrange(-max_num, max_num + 1), rng.randrange(1, 4))
    return Poly(variables, terms)


def test_rational_coercion_and_serialization():
    assert rat("3/4") == Fraction(3, 4)
    assert rat(7) == Fraction(7)
    assert rat_str(Fraction(3, 4)) == "3/4"
    assert rat_str(5) == "5/1"
    assert rat_str(Fraction(-1, 2)) == "-1/2"
    assert rat_str(0) == "0/1"


def test_rat_sqrt():
    assert rat_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert rat_sqrt(0) == 0
    assert rat_sqrt(2) is None
    assert rat_sqrt(-4) is None


def test_poly_product_univariate():
    t = Poly.var(("t",), "t")
    assert (t + 1) * (t - 1) == t ** 2 - 1


def test_poly_product_bivariate():
    vs = ("t1", "t2")
    t1 = Poly.var(vs, "t1")
    t2 = Poly.var(vs, "t2")
    assert (t1 ** 2 * t2 + t2) * t1 == t1 ** 3 * t2 + t1 * t2


def test_poly_derivative_basic():
    t = Poly.var(("t", "a0"), "t")
    a0 = Poly.var(("t", "a0"), "a0")
    assert (t ** 4).derivative("t") == 4 * t ** 3
    assert a0.derivative("t") == Poly(("t", "a0"))


def test_poly_derivative_difference_quotient_oracle():
    """d/dt of t^3 + 2t, checked against exact difference quotients.

    For a polynomial p, the synthetic-division quotient q(t) of
    p(t) - p(t0) by (t - t0) satisfies q(t0) = p'(t0) exactly.
    """
    t = Poly.var(("t",), "t")
    p = t ** 3 + 2 * t
    dp = p.derivative("t")
    assert dp == 3 * t ** 2 + 2
    for t0 in (Fraction(0), Fraction(1), Fraction(-2), Fraction(1, 3), Fraction(7, 5)):
        q, r = poly_divmod_linear(p - p.eval_all({"t": t0}), "t", t0)
        assert r.is_zero
        assert q.eval_all({"t": t0}) == dp.eval_all({"t": t0})


def test_poly_ring_axioms_randomized():
    rng = random.Random(SEED)
    vs = ("t1", "t2")
    one = Poly.const(vs, 1)
    for _ in range(1000):
        a = _rand_poly(rng, vs)
        b = _rand_poly(rng, vs)
        c = _rand_poly(rng, vs)
        assert (a + b) + c == a + (b + c)
        assert a + b == b + a
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a * one == a
        assert a + (-a) == Poly(vs)


def test_poly_substitute_and_eval():
    vs = ("t", "c")
    t = Poly.var(vs, "t")
    c = Poly.var(vs, "c")
    p = t ** 2 + c
    assert p.substitute({"t": t + 1}) == t ** 2 + 2 * t + 1 + c
    assert p.eval_all({"t": Fraction(2), "c": Fraction(-1)}) == 3
    assert p.substitute({"c": 0}) == t ** 2


def test_poly_context_mismatch_raises():
    a = Poly.var(("t",), "t")
    b = Poly.var(("s",), "s")
    with pytest.raises(VariableContextMismatch):
        a + b


def test_poly_with_context_embedding():
    p = Poly.var(("t",), "t") ** 2
    q = p.with_context(("t", "x"))
    assert q == Poly.var(("t", "x"), "t") ** 2
    r = Poly.var(("t", "x"), "x")
    with pytest.raises(VariableContextMismatch):
        r.with_context(("t",))


def test_exact_div_linear_difference_of_squares():
    vs = ("t1", "t2")
    t1 = Poly.var(vs, "t1")
    t2 = Poly.var(vs, "t2")
    assert exact_div_linear(t1 ** 2 - t2 ** 2, "t1", "t2") == t1 + t2


def test_exact_div_linear_multiply_back():
    vs = ("t1", "t2")
    t1 = Poly.var(vs, "t1")
    t2 = Poly.var(vs, "t2")
    p = t1 ** 3 * t2 - t1 * t2 ** 3
    q = exact_div_linear(p, "t1", "t2")
    assert q == t1 * t2 * (t1 + t2)
    assert q * (t1 - t2) == p


def test_exact_div_linear_remainder_raises():
    vs = ("t1", "t2")
    t1 = Poly.var(vs, "t1")
    t2 = Poly.var(vs, "t2")
    with pytest.raises(NonzeroRemainder):
        exact_div_linear(t1 - t2 + 1, "t1", "t2")


def test_exact_div_linear_randomized_roundtrip():
    rng = random.Random(SEED)
    vs = ("t1", "t2")
    t1 = Poly.var(vs, "t1")
    t2 = Poly.var(vs, "t2")
    for _ in range(200):
        p = _rand_poly(rng, vs)
        assert exact_div_linear(p * (t1 - t2), "t1", "t2") == p


def test_poly_divmod_linear():
    t = Poly.var(("t", "c"), "t")
    c = Poly.var(("t", "c"), "c")
    p = (t - 2) * (t ** 2 + c) + 5
    q, r = poly_divmod_linear(p, "t", 2)
    assert q == t ** 2 + c
    assert r == Poly.const(("t", "c"), 5)


def test_poly_div_linear_power():
    t = Poly.var(("t",), "t")
    p = (t + 1) ** 2 * (t ** 2 - 3) + (2 * t - 7)
    q, r = poly_div_linear_power(p, "t", -1, 2)
    assert q == t ** 2 - 3
    assert r == 2 * t - 7
    assert q * (t + 1) ** 2 + r == p


def test_quadext_arithmetic():
    a = QuadExtElem(1, 1, 5)
    b = QuadExtElem(1, -1, 5)
    assert a * b == QuadExtElem(-4, 0, 5)
    assert a + b == QuadExtElem(2, 0, 5)
    assert (a / b) * b == a
    assert a.norm() == -4


def test_quadext_radicand_mismatch():
    with pytest.raises(VariableContextMismatch):
        QuadExtElem(1, 1, 5) + QuadExtElem(1, 1, 7)


def test_quadext_norm_zero_division():
    # 2 + sqrt(4) has norm zero when the radicand is a perfect square
    degenerate = QuadExtElem(2, 1, 4)
    with pytest.raises(ZeroDivisionError):
        QuadExtElem(1, 0, 4) / degenerate


def test_quadext_sqrt():
    # (1 + sqrt(2))^2 = 3 + 2 sqrt(2)
    s = QuadExtElem(3, 2, 2).sqrt()
    assert s * s == QuadExtElem(3, 2, 2)
    # sqrt(r) lives in Q(sqrt(r)) even when r itself is not a square
    s2 = QuadExtElem(5, 0, 5).sqrt()
    assert s2 == QuadExtElem(0, 1, 5)
    assert QuadExtElem(Fraction(9, 4), 0, 7).sqrt() == QuadExtElem(Fraction(3, 2), 0, 7)
    with pytest.raises(SqrtNotRepresentable):
        QuadExtElem(2, 0, 3).sqrt()


def test_quadext_json():
    e = QuadExtElem(Fraction(1, 2), -3, 5)
    assert e.to_json() == {"base": "1/2", "radical_coeff": "-3/1", "radicand": "5/1"}


def _series(terms, trunc, radicand=0):
    return LaurentSeries.from_terms("u", {n: rat(c) for n, c in terms.items()}, trunc, radicand)


def test_series_invert_geometric():
    # 1 / (u (1 + u)) = u^-1 (1 - u + u^2 - ...)
    s = _series({1: 1, 2: 1}, 10)
    inv = s.invert()
    assert inv.coeff_at(-1) == QuadExtElem(1, 0, 0)
    assert inv.coeff_at(0) == QuadExtElem(-1, 0, 0)
    assert inv.coeff_at(1) == QuadExtElem(1, 0, 0)
    assert inv.coeff_at(2) == QuadExtElem(-1, 0, 0)
    prod = s * inv
    assert prod.coeff_at(0) == QuadExtElem(1, 0, 0)
    for n in range(1, prod.trunc):
        assert prod.coeff_at(n).is_zero


def test_series_invert_requires_unit():
    zero = LaurentSeries("u", 5, [], 5, 0)
    with pytest.raises(ZeroLeading):
        zero.invert()


def test_series_sqrt_pole():
    # sqrt(a u^-4) = sqrt(a) u^-2 for a nonsquare positive rational a
    a = 5
    s = LaurentSeries.from_terms("u", {-4: QuadExtElem(a, 0, a)}, 4, a)
    root = s.sqrt()
    assert root.lead == -2
    assert root.coeff_at(-2) == QuadExtElem(0, 1, a)
    for n in range(-1, root.trunc):
        assert root.coeff_at(n).is_zero


def test_series_sqrt_binomial():
    # sqrt(4 u^2 (1 + u)) = 2u (1 + u/2 - u^2/8 + ...)
    s = _series({2: 4, 3: 4}, 12)
    root = s.sqrt()
    assert root.coeff_at(1) == QuadExtElem(2, 0, 0)
    assert root.coeff_at(2) == QuadExtElem(1, 0, 0)
    assert root.coeff_at(3) == QuadExtElem(Fraction(-1, 4), 0, 0)
    sq = root * root
    assert sq.coeff_at(2) == QuadExtElem(4, 0, 0)
    assert sq.coeff_at(3) == QuadExtElem(4, 0, 0)
    for n in range(4, sq.trunc):
        assert sq.coeff_at(n).is_zero


def test_series_sqrt_odd_lead_rejected():
    s = _series({1: 1}, 6)
    with pytest.raises(SqrtNotRepresentable):
        s.sqrt()


def test_series_roundtrips_randomized():
    rng = random.Random(SEED)
    for _ in range(25):
        lead = rng.randrange(-3, 3)
        coeffs = [Fraction(rng.randrange(-5, 6), rng.randrange(1, 4)) for _ in range(6)]
        coeffs[0] = Fraction(rng.randrange(1, 6))  # invertible lead
        s = LaurentSeries("u", lead, coeffs, lead + 8, 0)
        prod = s * s.invert()
        assert prod.coeff_at(0) == QuadExtElem(1, 0, 0)
        for n in range(1, prod.trunc):
            assert prod.coeff_at(n).is_zero
        sq = s * s
        back = sq.sqrt()
        # square root is fixed up to sign; normalize on the leading term
        if back.coeffs[0] != s.coeffs[0]:
            back = -back
        diff = back - s
        assert diff.is_zero


def test_series_residue_and_truncation_guard():
    s = _series({-1: Fraction(1, 2), 3: 7}, 5)
    assert s.residue() == QuadExtElem(Fraction(1, 2), 0, 0)
    with pytest.raises(ValueError):
        s.coeff_at(5)


def test_series_addition_precision():
    a = _series({0: 1}, 4)
    b = _series({0: 2, 5: 1}, 8)
    c = a + b
    assert c.trunc == 4
    assert c.coeff_at(0) == QuadExtElem(3, 0, 0)
