"""Canonical heights, the height pairing, and the regulator on y^2 = x^3 + d.

The canonical height used here is the doubling-limit normalization

    hhat(P) = lim 4^-n * log max(|num x(2^n P)|, |den x(2^n P)|)

(the convention under which hhat(2P) = 4*hhat(P) and hhat tracks the naive
x-height). Iterating exact coordinates is infeasible at high precision, so
the limit is split by places. Write x(P) = a/b in lowest terms and let

    F(a, b) = a^4 - 8*d*a*b^3,   G(a, b) = 4*a^3*b + 4*d*b^4

be the numerator and denominator of the duplication map. With g_n the gcd
cancelled at step n, telescoping gives the exact identity

    hhat(P) = log max(|a|, |b|)
              + sum_n 4^-(n+1) * D_n
              - sum_p log p * sum_n 4^-(n+1) * e_{p,n}

where D_n = log(max(|F|, |G|) / max(|a_n|, |b_n|)^4) depends only on the
real ratio x_n (a cheap floating iteration), and e_{p,n} = v_p(g_n) is
recovered by iterating the pair p-adically. Every g_n divides the resultant
of F and G, which is +-2^8 * 3^6 * d^4, so the non-archimedean corrections
are supported exactly on the primes of bad reduction; denominator primes of
x(P) enter through the exact leading term. Truncation tails are bounded
rigorously via the cofactor identities

    4x^2*F + (9d - x^3)*G = 36*d^2 * b^7-side,
    (9 + 8dt^3)*F* + 16dt^2*G* = 9 * a^7-side (t = 1/x),

which sandwich max(|F|, |G|) between computable multiples of max(|a|,|b|)^4.
The reported error bound is the rigorous tail plus a generous allowance for
floating rounding, validated against an exact doubling-limit oracle in the
test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpf

from .curves import MordellCurve, Point
from .intmath import factorize, valuation


class DegenerateInputError(ValueError):
    """Regulator/verdict input is torsion, at infinity, or a coincident pair."""


class PrecisionUnreachableError(RuntimeError):
    """The requested error bound could not be certified."""


class _RetryHigherPrecision(Exception):
    pass


@dataclass(frozen=True)
class HeightValue:
    """A real value with an absolute error bound."""

    value: mpf
    error_bound: mpf

    def __float__(self) -> float:
        return float(self.value)


@dataclass(frozen=True)
class HeightReport:
    heights: tuple[HeightValue, ...]
    gram: tuple[tuple[HeightValue, ...], ...]
    regulator: HeightValue
    independent: bool

    def to_json_dict(self, digits: int = 17) -> dict:
        def s(x) -> str:
            return mp.nstr(x, digits, strip_zeros=False)

        return {
            "heights": [s(h.value) for h in self.heights],
            "heights_error": [s(h.error_bound) for h in self.heights],
            "gram": [[s(e.value) for e in row] for row in self.gram],
            "gram_error": [[s(e.error_bound) for e in row] for row in self.gram],
            "regulator": s(self.regulator.value),
            "regulator_error": s(self.regulator.error_bound),
            "independent": self.independent,
        }


DEFAULT_TOL = "1e-20"


def naive_height(point: Point) -> mpf:
    """log max(|num|, |den|) of the x-coordinate in lowest terms."""
    if point.is_infinity:
        raise ValueError("the point at infinity has no naive height")
    x = point.x
    return mp.log(max(abs(x.numerator), abs(x.denominator)))


def doubling_limit_height(curve: MordellCurve, point: Point, steps: int) -> mpf:
    """Low-precision oracle: 4^-n * naive height of x(2^n P), exactly iterated.

    Coordinate size grows fourfold per step; keep steps small (<= 8 or so).
    """
    curve.require_on_curve(point)
    if point.is_infinity:
        return mpf(0)
    d = curve.d
    a, b = point.x.numerator, point.x.denominator
    for _ in range(steps):
        big_a = a**4 - 8 * d * a * b**3
        big_b = 4 * a**3 * b + 4 * d * b**4
        if big_b == 0:
            return mpf(0)  # the orbit hit infinity: P is torsion, hhat(P) = 0
        g = math.gcd(big_a, big_b)
        a, b = big_a // g, big_b // g
    return mp.log(max(abs(a), abs(b))) / mpf(4) ** steps


def _bad_primes(d: int) -> list[tuple[int, int]]:
    """(p, v_p(resultant)) for every prime that can cancel in the duplication.

    The resultant of the duplication quartics is +-2^8 * 3^6 * d^4.
    """
    dfac = factorize(d)
    out = []
    for p in sorted({2, 3} | set(dfac)):
        rp = 4 * dfac.get(p, 0)
        if p == 2:
            rp += 8
        elif p == 3:
            rp += 6
        out.append((p, rp))
    return out


def _archimedean_sum(d: int, a: int, b: int, n_terms: int, dps: int) -> mpf:
    """sum of 4^-(n+1) * D_n along the floating duplication orbit."""
    x = mpf(a) / mpf(b)
    dm = mpf(d)
    total = mpf(0)
    quarter = mpf(1) / 4
    weight = quarter
    guard = mpf(10) ** (-(2 * dps) // 3)
    for _ in range(n_terms):
        m = max(abs(x), mpf(1))
        f = x**4 - 8 * dm * x
        g = 4 * x**3 + 4 * dm
        total += weight * (mp.log(max(abs(f), abs(g))) - 4 * mp.log(m))
        if abs(g) <= guard * m**3:
            # orbit drifted too close to a real two-division point for this
            # working precision; the caller restarts with more digits
            raise _RetryHigherPrecision
        x = f / g
        weight *= quarter
    return total


def _padic_correction_exponent(d: int, a: int, b: int, p: int, rp: int, n_terms: int) -> Fraction:
    """sum of 4^-(n+1) * v_p(gcd at step n), exactly, via p-adic iteration.

    The pair is tracked modulo p^M up to unit factors; each step divides out
    exactly p^e where e = v_p(gcd(F, G)) <= v_p(resultant) = rp, so starting
    precision M = n_terms*rp + rp + 4 never runs out.
    """
    m_cur = n_terms * rp + rp + 4
    mod = p**m_cur
    alpha, beta = a % mod, b % mod
    total = Fraction(0)
    for n in range(n_terms):
        big_a = (alpha**4 - 8 * d * alpha * beta**3) % mod
        big_b = (4 * alpha**3 * beta + 4 * d * beta**4) % mod
        e_a = valuation(big_a, p) if big_a else m_cur
        e_b = valuation(big_b, p) if big_b else m_cur
        e = min(e_a, e_b)
        if e > rp:
            raise AssertionError(
                f"duplication gcd exceeded its resultant bound at p={p} (e={e} > {rp})"
            )
        if e:
            total += Fraction(e, 4 ** (n + 1))
        m_cur -= e
        mod = p**m_cur
        alpha = (big_a // p**e) % mod
        beta = (big_b // p**e) % mod
    return total


def canonical_height(curve: MordellCurve, point: Point, tol=DEFAULT_TOL) -> HeightValue:
    """Neron-Tate height with a certified absolute error bound <= tol.

    Torsion points and the point at infinity report exactly 0 +- 0.
    """
    curve.require_on_curve(point)
    if point.is_infinity or curve.order_of_point(point) is not None:
        return HeightValue(mpf(0), mpf(0))

    d = curve.d
    a, b = point.x.numerator, point.x.denominator

    tol_m = mpf(tol)
    if not tol_m > 0:
        raise ValueError("tol must be positive")
    log10_tol = float(mp.log10(tol_m))  # safe even below float range

    # tail constants (coarse floats suffice; 10% headroom is added)
    abs_d = abs(d)
    c_d = max(
        math.log(1 + 8 * abs_d),
        math.log(4 + 4 * abs_d),
        math.log((24 * abs_d + 9) / 9.0),
    )
    log_res = math.log(2**8 * 3**6) + 4 * math.log(abs_d)
    tail_const = 1.1 * (c_d + log_res) / 3.0

    n_terms = max(
        8,
        math.ceil((math.log(2 * tail_const) - log10_tol * math.log(10)) / math.log(4)),
    )

    last_bound = None
    for attempt in range(4):
        dps = max(25, math.ceil(-log10_tol) + 15 + math.ceil(0.61 * n_terms)) + 30 * attempt
        with mp.workdps(dps):
            try:
                arch = _archimedean_sum(d, a, b, n_terms, dps)
            except _RetryHigherPrecision:
                continue
            h0 = mp.log(max(abs(a), abs(b)))
            nonarch = mpf(0)
            for p, rp in _bad_primes(d):
                corr = _padic_correction_exponent(d, a, b, p, rp, n_terms)
                if corr:
                    nonarch += mp.log(p) * mpf(corr.numerator) / mpf(corr.denominator)
            value = h0 + arch - nonarch
            tail = mpf(tail_const) / mpf(4) ** n_terms
            slop = (n_terms + 8) * mpf(10) ** (3 - dps)
            error = tail + slop
            last_bound = error
            if error <= tol_m:
                return HeightValue(value, error)
        n_terms += 8
    raise PrecisionUnreachableError(
        f"could not certify error <= {tol} for point {point} (last bound {last_bound})"
    )


def height_pairing(curve: MordellCurve, p: Point, q: Point, tol=DEFAULT_TOL) -> HeightValue:
    """<P, Q> = (hhat(P+Q) - hhat(P) - hhat(Q)) / 2 with propagated bound."""
    hp = canonical_height(curve, p, tol)
    hq = canonical_height(curve, q, tol)
    hpq = canonical_height(curve, curve.add(p, q), tol)
    with mp.workdps(_working_dps(tol) + 10):
        value = (hpq.value - hp.value - hq.value) / 2
        error = (hpq.error_bound + hp.error_bound + hq.error_bound) / 2
    return HeightValue(value, error)


def _gram_matrix(curve, points, tol):
    n = len(points)
    heights = [canonical_height(curve, p, tol) for p in points]
    gram = [[None] * n for _ in range(n)]
    for i in range(n):
        gram[i][i] = heights[i]
        for j in range(i + 1, n):
            hij = canonical_height(curve, curve.add(points[i], points[j]), tol)
            value = (hij.value - heights[i].value - heights[j].value) / 2
            error = (hij.error_bound + heights[i].error_bound + heights[j].error_bound) / 2
            gram[i][j] = gram[j][i] = HeightValue(value, error)
    return heights, [tuple(row) for row in gram]


def _det_with_error(gram) -> HeightValue:
    """Determinant with a rigorous first-order perturbation bound.

    For entries a_ij +- e: |det(A+E) - det(A)| <= n * n! * emax * (M+emax)^(n-1)
    with M = max |a_ij|; a crude rounding allowance is added on top.
    """
    n = len(gram)
    vals = [[gram[i][j].value for j in range(n)] for i in range(n)]
    emax = max(gram[i][j].error_bound for i in range(n) for j in range(n))
    mmax = max(abs(gram[i][j].value) for i in range(n) for j in range(n))

    def det(rows):
        if len(rows) == 1:
            return rows[0][0]
        total = mpf(0)
        for j, head in enumerate(rows[0]):
            if head == 0:
                continue
            minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
            total += (-1) ** j * head * det(minor)
        return total

    value = det(vals)
    fact = math.factorial(n)
    perturb = n * fact * emax * (mmax + emax) ** (n - 1)
    rounding = fact * (mmax + emax) ** n * mpf(10) ** (5 - mp.dps)
    return HeightValue(value, perturb + rounding)


def regulator(curve: MordellCurve, points: list[Point], tol=DEFAULT_TOL) -> HeightValue:
    """Gram determinant of the height pairing over the given points.

    Torsion points and the point at infinity are rejected (a zero row would
    silently mask user error); dependent or repeated points are fine and
    yield a regulator indistinguishable from zero.
    """
    _reject_torsion_and_infinity(curve, points)
    dps = _working_dps(tol)
    with mp.workdps(dps):
        _, gram = _gram_matrix(curve, points, tol)
        return _det_with_error(gram)


def height_report(curve: MordellCurve, points: list[Point], tol=DEFAULT_TOL) -> HeightReport:
    """Heights, Gram matrix, regulator and the independence verdict."""
    _reject_torsion_and_infinity(curve, points)
    dps = _working_dps(tol)
    with mp.workdps(dps):
        heights, gram = _gram_matrix(curve, points, tol)
        reg = _det_with_error(gram)
        independent = bool(reg.value - reg.error_bound > 0)
        return HeightReport(tuple(heights), tuple(gram), reg, independent)


def independence_verdict(curve: MordellCurve, points: list[Point], tol=DEFAULT_TOL) -> HeightReport:
    """height_report plus rejection of coincident (up to sign) input points."""
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            if points[i] in (points[j], -points[j]):
                raise DegenerateInputError(
                    f"points {i + 1} and {j + 1} coincide up to sign; "
                    "the independence verdict is vacuous"
                )
    return height_report(curve, points, tol)


def _reject_torsion_and_infinity(curve, points):
    for idx, p in enumerate(points):
        if p.is_infinity:
            raise DegenerateInputError(f"point {idx + 1} is the point at infinity")
        curve.require_on_curve(p)
        if curve.order_of_point(p) is not None:
            raise DegenerateInputError(f"point {idx + 1} is a torsion point")


def _working_dps(tol) -> int:
    return max(30, math.ceil(-float(mp.log10(mpf(tol)))) + 15)
