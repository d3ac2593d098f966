import random
from fractions import Fraction

import pytest

from quantcurve.algebra import INF, LogSeries, QQ, RatFunc, TruncSeries, expand_ratfunc


def rf(num, den=(1,)):
    return RatFunc.from_coeffs(QQ, num, den)


def test_expand_at_infinity_geometric():
    s = expand_ratfunc(rf([1], [1, 1]), INF, 4)
    assert [s.coefficient(k) for k in range(5)] == [0, 1, -1, 1, -1]


def test_expand_at_zero():
    s = expand_ratfunc(rf([0, 1]), Fraction(0), 4)
    assert s.val == 1 and s.coefficient(1) == 1


def test_expand_gauss_discriminant_at_infinity():
    # (3x^2 - 3x + 1)/(4x^2(x-1)^2) decays to second order at infinity;
    # as a weight-2 section that is a double pole there
    f = rf([1, -3, 3], [0, 0, 4, -8, 4])
    s = expand_ratfunc(f, INF, 6)
    assert s.val == 2 and s.coefficient(2) == Fraction(3, 4)
    from quantcurve.spectral import KSection

    assert KSection(f, 2).order_at(INF) == -2


def test_sqrt_binomial():
    s = TruncSeries(QQ, 0, [1, 1], 6)
    r = s.sqrt(1)
    assert r.coefficient(0) == 1
    assert r.coefficient(1) == Fraction(1, 2)
    assert r.coefficient(2) == Fraction(-1, 8)
    assert (r * r).eq_through(s)


def test_sqrt_quadratic_series():
    s = expand_ratfunc(rf([1, -3, 3]), Fraction(0), 5)
    r = s.sqrt(1)
    assert r.coefficient(0) == 1 and r.coefficient(1) == Fraction(-3, 2)
    assert r.coefficient(2) == Fraction(3, 8)
    assert (r * r).eq_through(s)


def test_sqrt_of_square_monomial():
    s = TruncSeries(QQ, 2, [1], 6)
    assert s.sqrt(1).eq_through(TruncSeries(QQ, 1, [1], 5))


def test_sqrt_odd_valuation_rejected():
    with pytest.raises(ValueError):
        TruncSeries(QQ, 1, [1], 6).sqrt(1)


def test_sqrt_wrong_root_rejected():
    with pytest.raises(ValueError):
        TruncSeries(QQ, 0, [4, 1], 6).sqrt(3)


def test_log_exp_examples():
    t = TruncSeries.uniformizer(QQ, 6)
    one_plus = t + 1
    lg = one_plus.log1()
    assert [lg.coefficient(k) for k in range(1, 5)] == [
        Fraction(1), Fraction(-1, 2), Fraction(1, 3), Fraction(-1, 4)]
    ex = t.exp()
    assert [ex.coefficient(k) for k in range(4)] == [
        Fraction(1), Fraction(1), Fraction(1, 2), Fraction(1, 6)]
    u = TruncSeries(QQ, 0, [1, 1, 1], 8)
    assert u.log1().exp().eq_through(u)


def test_log_exp_domain_errors():
    with pytest.raises(ValueError):
        TruncSeries(QQ, 0, [2, 1], 4).log1()
    with pytest.raises(ValueError):
        TruncSeries(QQ, 0, [1, 1], 4).exp()


def test_reversion_catalan():
    x = expand_ratfunc(rf([1, 0, 1], [0, 1]), Fraction(0), 9)  # z + 1/z at z = 0
    z = x.reversion()
    # z(1/xi) = xi + xi^3 + 2 xi^5 + 5 xi^7 + ... with Catalan numbers
    assert [z.coefficient(k) for k in (1, 3, 5, 7, 9)] == [1, 1, 2, 5, 14]
    assert all(z.coefficient(k) == 0 for k in (2, 4, 6, 8))


def test_reversion_identity_and_scaling():
    t = TruncSeries.uniformizer(QQ, 8)
    assert t.reversion().eq_through(t)
    two_t = t * 2
    half = two_t.reversion()
    assert half.coefficient(1) == Fraction(1, 2)
    assert all(half.coefficient(k) == 0 for k in range(2, 8))


def test_reversion_roundtrip_random():
    rng = random.Random(5)
    for _ in range(20):
        coeffs = [Fraction(rng.randint(1, 5))] + [
            Fraction(rng.randint(-4, 4)) for _ in range(6)]
        s = TruncSeries(QQ, 1, coeffs, 7)
        g = s.reversion()
        back = s.compose(g)
        assert back.eq_through(TruncSeries.uniformizer(QQ, back.order))


def test_reversion_bad_valuation():
    with pytest.raises(ValueError):
        TruncSeries(QQ, 2, [1], 6).reversion()


def test_order_tracking_never_pads():
    a = TruncSeries(QQ, 0, [1, 1], 3)
    b = TruncSeries(QQ, 0, [1, 1, 1, 1, 1, 1], 5)
    assert (a * b).order == 3
    assert (a + b).order == 3
    assert a.inverse().order == 3


def test_coefficient_beyond_order_raises():
    s = TruncSeries(QQ, 0, [1], 3)
    with pytest.raises(ValueError):
        s.coefficient(4)


def test_log_series_arithmetic():
    body = TruncSeries(QQ, 1, [1], 5)
    a = LogSeries(Fraction(1, 4), body)
    b = LogSeries(Fraction(1, 2), body)
    c = a + b
    assert c.lam == Fraction(3, 4)
    assert (a * 2).lam == Fraction(1, 2)
    assert a.has_log() and not LogSeries(0, body).has_log()


def test_sqrt_random_property():
    rng = random.Random(41)
    for _ in range(40):
        val = 2 * rng.randint(-2, 2)
        lead = Fraction(rng.randint(1, 6)) ** 2
        coeffs = [lead] + [Fraction(rng.randint(-5, 5)) for _ in range(6)]
        s = TruncSeries(QQ, val, coeffs, val + 6)
        r = s.sqrt()
        assert (r * r).eq_through(s)


def test_log_exp_random_roundtrips():
    rng = random.Random(42)
    for _ in range(40):
        coeffs = [Fraction(1)] + [Fraction(rng.randint(-4, 4), rng.randint(1, 3))
                                  for _ in range(5)]
        u = TruncSeries(QQ, 0, coeffs, 5)
        assert u.log1().exp().eq_through(u)
        v = TruncSeries(QQ, 1, coeffs, 6)
        assert (v.exp() - 1).is_zero() or v.exp().log1().eq_through(v)
