r"""All-order WKB hierarchy for (h d/dx)^2 + a1 (h d/dx) + a2, solved as
exact truncated series at one place of the line.

Writing the solution as exp(sum_m h^(m-1) S_m(x)), the orders in h give

    order 0:    S0'^2 + a1 S0' + a2 = 0
    order 1:    2 S0' S1' + S0'' + a1 S1' = 0
    order m+1:  S_m'' + sum_{a+b=m+1} S_a' S_b' + a1 S_{m+1}' = 0

All x-derivatives run through the chain rule in a local parameter tau with
tau**e equal to the uniformizer, so the same code handles finite points,
the point at infinity, and square-root branch charts (e = 2).  Integration
constants are fixed by: no constant term in any S_m, log terms recorded on
the side.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import INF, LogSeries, QuadExtField, QQ, RatFunc, TruncSeries, expand_ratfunc


@dataclass
class WkbConfig:
    a1: RatFunc
    a2: RatFunc
    place: object           # field element or INF
    e: int = 1
    branch: str = "plus"     # sign in front of the square root of a1^2 - 4 a2
    order: int = 12          # guaranteed tau-order for every S_m body
    depth: int = 2           # compute S_0 .. S_depth

    def __post_init__(self):
        if self.e not in (1, 2):
            raise ValueError("ramification index must be 1 or 2")
        if self.branch not in ("plus", "minus"):
            raise ValueError("branch must be 'plus' or 'minus'")


class WkbState:
    """S_0 .. S_M as LogSeries plus their x-derivatives as plain series."""

    def __init__(self, config, field, S, S_prime):
        self.config = config
        self.field = field
        self.S = S
        self.S_prime = S_prime

    @property
    def depth(self):
        return len(self.S) - 1


def _ddx(series, place, e):
    """d/dx through the chain rule; exact monomial for dtau/dx."""
    d = series.derivative()
    f = series.field
    if place is INF:
        return d.shift(1 + e) * f.of(Fraction(-1, e))
    return d.shift(1 - e) * f.of(Fraction(1, e))


def _antiderivative_x(series, place, e):
    """Antiderivative in x; returns (lambda, body) with lambda on log(tau^e)."""
    f = series.field
    if place is INF:
        integrand = series.shift(-1 - e) * f.of(-e)
    else:
        integrand = series.shift(e - 1) * f.of(e)
    logc, body = integrand.integrate()
    return logc / f.of(e), body


def semiclassical_root(cfg, _work_order=None):
    """Solve the leading equation; extends the field by a square root if needed.

    Returns a WkbState holding S0 only.
    """
    field = cfg.a1.field
    work = _work_order if _work_order is not None else cfg.order + 4 * (cfg.depth + 2)
    worder = work // cfg.e + 2
    a1, a2 = cfg.a1, cfg.a2
    while True:
        a1s = expand_ratfunc(a1, cfg.place, worder, e=cfg.e)
        a2s = expand_ratfunc(a2, cfg.place, worder, e=cfg.e)
        disc = a1s * a1s - 4 * a2s
        if disc.is_zero():
            raise ValueError("degenerate operator: zero discriminant")
        if disc.val % 2 != 0:
            if cfg.e != 2:
                raise ValueError(
                    f"odd discriminant valuation {disc.val}: a branch chart (e = 2) is required"
                )
            raise ValueError("odd discriminant valuation persists on the branch chart")
        lead = disc.coeffs[0]
        root = field.sqrt(lead)
        if root is not None:
            break
        field = QuadExtField(field, lead)
        a1 = RatFunc.from_coeffs(field, [field.of(c) for c in cfg.a1.num.coeffs],
                                 [field.of(c) for c in cfg.a1.den.coeffs])
        a2 = RatFunc.from_coeffs(field, [field.of(c) for c in cfg.a2.num.coeffs],
                                 [field.of(c) for c in cfg.a2.den.coeffs])
    sq = disc.sqrt(root)
    if cfg.branch == "plus":
        s0p = (sq - a1s) * field.of(Fraction(1, 2))
    else:
        s0p = (-sq - a1s) * field.of(Fraction(1, 2))
    lam, body = _antiderivative_x(s0p, cfg.place, cfg.e)
    state = WkbState(cfg, field, [LogSeries(lam, body)], [s0p])
    state._a1s = a1s
    state._a2s = a2s
    return state


def consistency_s1(state):
    """Append S1 from the first subleading equation."""
    if state.depth != 0:
        raise ValueError("S1 must be computed on a fresh semiclassical state")
    cfg = state.config
    s0p = state.S_prime[0]
    denom = 2 * s0p + state._a1s
    if denom.is_zero():
        raise ValueError("2 S0' + a1 vanishes: reducible curve")
    s1p = -_ddx(s0p, cfg.place, cfg.e) / denom
    lam, body = _antiderivative_x(s1p, cfg.place, cfg.e)
    state.S.append(LogSeries(lam, body))
    state.S_prime.append(s1p)
    return state


def wkb_extend(state, depth=None):
    """Extend the hierarchy up to S_depth via the h^(m+1) recursion."""
    cfg = state.config
    depth = cfg.depth if depth is None else depth
    if state.depth < 1:
        raise ValueError("extend requires S0 and S1")
    denom = 2 * state.S_prime[0] + state._a1s
    while state.depth < depth:
        m = state.depth
        rhs = _ddx(state.S_prime[m], cfg.place, cfg.e)
        for a in range(1, m + 1):
            b = m + 1 - a
            if b >= 1 and b <= m:
                rhs = rhs + state.S_prime[a] * state.S_prime[b]
        sp = -rhs / denom
        if sp.order < cfg.order:
            raise ValueError(
                f"truncation exhausted at depth {m + 1}: guaranteed order "
                f"{sp.order} below requested {cfg.order}"
            )
        lam, body = _antiderivative_x(sp, cfg.place, cfg.e)
        state.S.append(LogSeries(lam, body))
        state.S_prime.append(sp)
    return state


def solve_wkb(cfg):
    """Full pipeline: semiclassical root, consistency, extension to cfg.depth."""
    state = semiclassical_root(cfg)
    if cfg.depth >= 1:
        consistency_s1(state)
    if cfg.depth >= 2:
        wkb_extend(state)
    return state


def verify_operator(state, max_level=None):
    """Substitute the expansion back into the operator.

    The residual h^2 F'' + h^2 (F')^2 + a1 h F' + a2 with
    F' = sum h^(m-1) S_m' collapses order by order in h; the report lists,
    for each h-level up to the state's depth, whether the series coefficient
    vanishes identically through its guaranteed order.
    """
    cfg = state.config
    M = state.depth if max_level is None else min(max_level, state.depth)
    report = []
    ok = True
    for k in range(M + 1):
        resid = TruncSeries.zero(state.field, state.S_prime[0].order)
        for a in range(0, k + 1):
            b = k - a
            if a <= state.depth and b <= state.depth:
                resid = resid + state.S_prime[a] * state.S_prime[b]
        if k >= 1 and k - 1 <= state.depth:
            resid = resid + _ddx(state.S_prime[k - 1], cfg.place, cfg.e)
        if k <= state.depth:
            resid = resid + state._a1s * state.S_prime[k]
        if k == 0:
            resid = resid + state._a2s
        zero = resid.is_zero()
        report.append({"h_power": k, "zero": zero, "through_order": resid.order})
        ok = ok and zero
    return {"ok": ok, "levels": report}


class WaveExpansion:
    """exp(sum h^(m-1) S_m) with log parts factored into a prefactor.

    ``prefactor_exponent`` multiplies log of the uniformizer (so at infinity
    the prefactor is (1/x) to that exponent); ``body`` is a series in tau
    with exact coefficients in the h-field.  ``h_order`` is the h-power
    through which coefficients are guaranteed.
    """

    def __init__(self, prefactor_exponent, body, h_order, state):
        self.prefactor_exponent = prefactor_exponent
        self.body = body
        self.h_order = h_order
        self.state = state

    def coefficient(self, k):
        return self.body.coefficient(k)

    def specialize_h(self, value):
        """Evaluate all coefficients at a rational value of h."""
        value = Fraction(value)
        body = self.body.map_coeffs(lambda c: c.rf(value), field=QQ)
        pref = self.prefactor_exponent.rf(value)
        return pref, body


def assemble_wavefunction(state, order_x=None, order_h=None):
    """Exponentiate the computed S_m into a bivariate expansion.

    The exponent sum h^(m-1) S_m has Laurent-polynomial h-dependence in
    every local coefficient, so the exponential is taken with sparse
    h-power dictionaries and the standard derivative recurrence
    E_n = (1/n) sum k B_k E_{n-k}; results are packed into the h-field
    only at the end.
    """
    cfg = state.config
    if state.field is not QQ:
        raise ValueError("wave assembly is supported over the rational tower")
    from .algebra import HBAR_FIELD

    hfield = HBAR_FIELD
    if order_h is not None and order_h > state.depth - 1:
        raise ValueError("requested h-order exceeds state depth")
    horder = state.depth - 1 if order_h is None else order_h
    body_order = min(s.body.order for s in state.S)
    if order_x is not None:
        if order_x > body_order:
            raise ValueError(
                f"requested x-order {order_x} exceeds guaranteed order {body_order}"
            )
        body_order = order_x
    # exponent tau-coefficients as {h power: Fraction}
    B = [dict() for _ in range(body_order + 1)]
    pref = {}
    for m, s in enumerate(state.S):
        if not state.field.is_zero(s.lam):
            pref[m - 1] = pref.get(m - 1, Fraction(0)) + s.lam
        for k, c in s.body.items():
            if k < 0:
                raise ValueError(
                    "exponent body has nonpositive valuation: essential prefactor not supported"
                )
            if k <= body_order:
                B[k][m - 1] = B[k].get(m - 1, Fraction(0)) + c
    if B[0]:
        raise ValueError("exponent body must vanish at the expansion center")
    E = [dict() for _ in range(body_order + 1)]
    E[0] = {0: Fraction(1)}
    for n in range(1, body_order + 1):
        acc = {}
        for k in range(1, n + 1):
            if not B[k]:
                continue
            for p1, c1 in B[k].items():
                scaled = k * c1
                for p2, c2 in E[n - k].items():
                    key = p1 + p2
                    acc[key] = acc.get(key, Fraction(0)) + scaled * c2
        E[n] = {p: c / n for p, c in acc.items() if c}
    coeffs = [_pack_hpoly(hfield, E[n]) for n in range(body_order + 1)]
    body = TruncSeries(hfield, 0, coeffs, body_order, e=cfg.e)
    return WaveExpansion(_pack_hpoly(hfield, pref), body, horder, state)


def _pack_hpoly(hfield, d):
    """{h power: Fraction} -> element of the h-field, without gcd work."""
    from .algebra import Poly, RatFunc as RF

    base = hfield.base
    if not d:
        return hfield.zero()
    shift = max(0, -min(d))
    deg = max(d) + shift
    coeffs = [base.zero()] * (deg + 1)
    for p, c in d.items():
        coeffs[p + shift] = c
    num = Poly(base, coeffs)
    den = Poly(base, [base.zero()] * shift + [base.one()])
    return hfield.of(RF(num, den, reduce=False))
