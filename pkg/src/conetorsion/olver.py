"""Exact-rational coefficient polynomials of the uniform large-order Bessel expansions.

The uniform expansions of I_nu(nu z) and K_nu(nu z) for large order carry
polynomial coefficients u_r(t), v_r(t) in the variable t = (1 + z^2)^(-1/2).
Taking formal logarithms of the bracketed series produces two further
families D_r(t) and M_r(t, A) (the latter with an affine shift parameter A
mixing the u- and v-series), whose coefficient arrays x_{r,b} and z_{r,b}(A)
on the exponent ladder t^{r+2b} feed the residue combinations downstream.

Everything in this module is exact rational arithmetic; floating point only
appears when a finished polynomial is evaluated at a numeric point.

Generation rules:

* u_0 = v_0 = 1,
  u_{r+1}(t) = (1/2) t^2 (1 - t^2) u_r'(t) + (1/8) \\int_0^t (1 - 5 s^2) u_r(s) ds,
  v_{r+1}(t) = u_{r+1}(t) + t (t^2 - 1) ( u_r(t)/2 + t u_r'(t) ).
  These are the standard recurrences for the uniform expansions; they are
  validated numerically (fit against high-order Bessel values) in the test
  suite before anything downstream trusts them.
* log(1 + sum_r u_r x^r) = sum_r D_r x^r as a formal power series.
* log[(1 + sum_r v_r x^r) + A t x (1 + sum_r u_r x^r)] = sum_r M_r(t, A) x^r.

Identities relied on downstream (all tested exactly):
M_r(1, A) = D_r(1) - (-A)^r / r, and the vanishing of
sum_b [2 x_{2r+1,b} - z_{2r+1,b}(-A) - z_{2r+1,b}(A)] for every odd index.
"""

from __future__ import annotations

import json
import threading
from fractions import Fraction

from .precision import DEFAULT_DPS, DomainError, context, to_complex, to_real


class StructureError(RuntimeError):
    """A generated polynomial violates its exponent-support invariant."""


class RationalPolynomial:
    """Sparse polynomial in one variable with exact Fraction coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {}
        if coeffs:
            for e, c in coeffs.items():
                c = Fraction(c)
                if c != 0:
                    self.coeffs[int(e)] = c

    @classmethod
    def constant(cls, c) -> "RationalPolynomial":
        return cls({0: Fraction(c)})

    def __add__(self, other):
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            s = out.get(e, Fraction(0)) + c
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
        return RationalPolynomial(out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def __mul__(self, other):
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return RationalPolynomial(out)

    def scale(self, c) -> "RationalPolynomial":
        c = Fraction(c)
        return RationalPolynomial({e: cc * c for e, cc in self.coeffs.items()})

    def derivative(self) -> "RationalPolynomial":
        return RationalPolynomial({e - 1: c * e for e, c in self.coeffs.items() if e != 0})

    def integral_from_zero(self) -> "RationalPolynomial":
        return RationalPolynomial({e + 1: c / (e + 1) for e, c in self.coeffs.items()})

    def coefficient(self, e: int) -> Fraction:
        return self.coeffs.get(e, Fraction(0))

    def support(self):
        return set(self.coeffs)

    def degree(self) -> int:
        return max(self.coeffs) if self.coeffs else 0

    def __call__(self, t):
        """Evaluate; exact if t is Fraction/int, numeric otherwise."""
        if isinstance(t, (int, Fraction)):
            acc = Fraction(0)
            for e, c in self.coeffs.items():
                acc += c * Fraction(t) ** e
            return acc
        acc = 0
        for e in sorted(self.coeffs):
            acc += self.coeffs[e] * t ** e
        return acc

    def __eq__(self, other):
        if isinstance(other, RationalPolynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == RationalPolynomial.constant(other).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def __repr__(self):
        if not self.coeffs:
            return "RationalPolynomial(0)"
        parts = [f"({c})*t^{e}" for e, c in sorted(self.coeffs.items())]
        return "RationalPolynomial(" + " + ".join(parts) + ")"


class ShiftPolynomial:
    """Polynomial in t whose coefficients are exact polynomials in the shift A.

    Stored as {(t_exponent, A_exponent): Fraction}.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {}
        if coeffs:
            for k, c in coeffs.items():
                c = Fraction(c)
                if c != 0:
                    self.coeffs[(int(k[0]), int(k[1]))] = c

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            s = out.get(k, Fraction(0)) + c
            if s == 0:
                out.pop(k, None)
            else:
                out[k] = s
        return ShiftPolynomial(out)

    def __mul__(self, other):
        out = {}
        for (e1, a1), c1 in self.coeffs.items():
            for (e2, a2), c2 in other.coeffs.items():
                k = (e1 + e2, a1 + a2)
                out[k] = out.get(k, Fraction(0)) + c1 * c2
        return ShiftPolynomial(out)

    def scale(self, c) -> "ShiftPolynomial":
        c = Fraction(c)
        return ShiftPolynomial({k: cc * c for k, cc in self.coeffs.items()})

    @classmethod
    def from_t_polynomial(cls, p: RationalPolynomial) -> "ShiftPolynomial":
        return cls({(e, 0): c for e, c in p.coeffs.items()})

    def at_shift(self, A) -> RationalPolynomial:
        """Evaluate the A-variable at an exact rational, leaving a t-polynomial."""
        A = Fraction(A)
        out = {}
        for (e, a), c in self.coeffs.items():
            out[e] = out.get(e, Fraction(0)) + c * A ** a
        return RationalPolynomial(out)

    def t_support(self):
        return {e for (e, _a) in self.coeffs}

    def shift_coefficient(self, t_exp: int) -> dict:
        """Map A-exponent -> Fraction for the coefficient of t**t_exp."""
        return {a: c for (e, a), c in self.coeffs.items() if e == t_exp}

    def __call__(self, t, A):
        if isinstance(t, (int, Fraction)) and isinstance(A, (int, Fraction)):
            return self.at_shift(A)(Fraction(t))
        acc = 0
        for (e, a), c in self.coeffs.items():
            acc += c * t ** e * A ** a
        return acc

    def __eq__(self, other):
        return isinstance(other, ShiftPolynomial) and self.coeffs == other.coeffs

    def __repr__(self):
        parts = [f"({c})*t^{e}*A^{a}" for (e, a), c in sorted(self.coeffs.items())]
        return "ShiftPolynomial(" + (" + ".join(parts) or "0") + ")"


_ONE = RationalPolynomial.constant(1)

# Generated families, memoised behind a lock so concurrent first use is safe.
_cache_lock = threading.Lock()
_u: list[RationalPolynomial] = [_ONE]
_v: list[RationalPolynomial] = [_ONE]
_d: dict[int, RationalPolynomial] = {}
_m: dict[int, ShiftPolynomial] = {}

_W_U = RationalPolynomial({2: 1, 4: -1})        # t^2 (1 - t^2)
_G_U = RationalPolynomial({0: 1, 2: -5})        # 1 - 5 s^2
_W_V = RationalPolynomial({3: 1, 1: -1})        # t (t^2 - 1)


def _extend_uv(r: int) -> None:
    while len(_u) <= r:
        u = _u[-1]
        nxt = _W_U * u.derivative()
        nxt = nxt.scale(Fraction(1, 2)) + (_G_U * u).integral_from_zero().scale(Fraction(1, 8))
        _u.append(nxt)
        transfer = u.scale(Fraction(1, 2)) + RationalPolynomial({1: 1}) * u.derivative()
        _v.append(nxt + _W_V * transfer)


def u_poly(r: int) -> RationalPolynomial:
    """Coefficient polynomial u_r(t) of the large-order expansion of I/K."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    with _cache_lock:
        _extend_uv(r)
        return _u[r]


def v_poly(r: int) -> RationalPolynomial:
    """Coefficient polynomial v_r(t) of the large-order expansion of I'/K'."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    with _cache_lock:
        _extend_uv(r)
        return _v[r]


def _series_log_t(coeff_at, rmax: int) -> list:
    """Formal-log coefficients l_r of 1 + sum c_r x^r, coefficients in a ring.

    Uses r*c_r = sum_{j=1}^r j*l_j*c_{r-j}; coeff_at(0) must be the ring unit.
    Works for both RationalPolynomial and ShiftPolynomial coefficients.
    """
    l = [None] * (rmax + 1)
    for r in range(1, rmax + 1):
        acc = coeff_at(r).scale(r)
        for j in range(1, r):
            acc = acc + (l[j] * coeff_at(r - j)).scale(-j)
        l[r] = acc.scale(Fraction(1, r))
    return l


def d_poly(r: int) -> RationalPolynomial:
    """Formal-log coefficient D_r(t) of the u-series."""
    if r < 1:
        raise ValueError("r must be >= 1")
    with _cache_lock:
        if r not in _d:
            _extend_uv(r)
            logs = _series_log_t(lambda i: _u[i], r)
            for i in range(1, r + 1):
                _d.setdefault(i, logs[i])
        return _d[r]


def m_poly(r: int) -> ShiftPolynomial:
    """Formal-log coefficient M_r(t, A) of the combined v-series + A t x u-series."""
    if r < 1:
        raise ValueError("r must be >= 1")
    with _cache_lock:
        if r not in _m:
            _extend_uv(r)

            def wcoeff(i):
                if i == 0:
                    return ShiftPolynomial({(0, 0): 1})
                c = ShiftPolynomial.from_t_polynomial(_v[i])
                # + A t * u_{i-1}
                c = c + ShiftPolynomial({(e + 1, 1): cc for e, cc in _u[i - 1].coeffs.items()})
                return c

            logs = _series_log_t(wcoeff, r)
            for i in range(1, r + 1):
                _m.setdefault(i, logs[i])
        return _m[r]


def xz_coefficients(r: int):
    """Arrays x_{r,b} and z_{r,b}(A) on the exponent ladder {r+2b : 0 <= b <= r}.

    Returns (xs, zs) with xs[b] a Fraction and zs[b] a dict A-exponent -> Fraction.
    Raises StructureError if a generated polynomial has support off the ladder,
    which would signal a recursion transcription bug.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    d = d_poly(r)
    m = m_poly(r)
    ladder = {r + 2 * b for b in range(r + 1)}
    if not d.support() <= ladder:
        raise StructureError(f"D_{r} has exponents {sorted(d.support() - ladder)} off the ladder")
    if not m.t_support() <= ladder:
        raise StructureError(f"M_{r} has exponents {sorted(m.t_support() - ladder)} off the ladder")
    xs = [d.coefficient(r + 2 * b) for b in range(r + 1)]
    zs = [m.shift_coefficient(r + 2 * b) for b in range(r + 1)]
    return xs, zs


def residual_bracket(r: int, A) -> list:
    """The combinations 2 x_{2r+1,b} - z_{2r+1,b}(-A) - z_{2r+1,b}(A), b = 0..2r+1.

    Exact Fractions; their sum over b vanishes for every r (tested).
    """
    A = Fraction(A)
    idx = 2 * r + 1
    xs, zs = xz_coefficients(idx)
    out = []
    for b in range(idx + 1):
        zA = sum((c * A ** a for a, c in zs[b].items()), Fraction(0))
        zmA = sum((c * (-A) ** a for a, c in zs[b].items()), Fraction(0))
        out.append(2 * xs[b] - zA - zmA)
    return out


def large_nu_term(r: int, A) -> RationalPolynomial:
    """Coefficient of (-nu)^(-r) in the large-order expansion of the log-determinant combination.

    Equals -2 D_r(t) + M_r(t, A) + M_r(t, -A) + (A^r + (-A)^r)/r, as an exact
    polynomial in t (the constant term is the shift contribution).
    """
    A = Fraction(A)
    p = d_poly(r).scale(-2) + m_poly(r).at_shift(A) + m_poly(r).at_shift(-A)
    const = (A ** r + (-A) ** r) / r
    return p + RationalPolynomial.constant(const)


def f_r_epsilon(r: int, A, eps, lam, P: int = DEFAULT_DPS):
    """Evaluate 2 D_{2r+1} - M_{2r+1}(.,-A) - M_{2r+1}(.,A) at t = (1 - eps^2 lam)^(-1/2).

    This is the odd-index subtraction polynomial of the regularized trace; it
    vanishes identically at lam = 0 and decays like (-lam)^(-1/2) at infinity.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    ctx = context(P)
    A = Fraction(A)
    idx = 2 * r + 1
    eps_m = to_real(eps, P, ctx)
    if not 0 < eps_m < 1:
        raise DomainError(f"eps must lie in (0,1), got {eps}")
    lam_m = to_complex(lam, P, ctx)
    w = 1 - eps_m ** 2 * lam_m
    if w.imag == 0 and w.real <= 0:
        raise DomainError(f"1 - eps^2*lam = {w} lies on the branch cut")
    t = 1 / ctx.sqrt(w)
    poly = d_poly(idx).scale(2) + (m_poly(idx).at_shift(-A) + m_poly(idx).at_shift(A)).scale(-1)
    acc = ctx.mpc(0)
    for e, c in sorted(poly.coeffs.items()):
        acc += to_real(c, P, ctx) * t ** e
    return acc.real if acc.imag == 0 else acc


def coefficient_tables(rmax: int) -> str:
    """JSON dump of the x/z coefficient tables up to index rmax (documentation aid)."""
    tables = {}
    for r in range(1, rmax + 1):
        xs, zs = xz_coefficients(r)
        tables[str(r)] = {
            "x": [str(c) for c in xs],
            "z": [{str(a): str(c) for a, c in sorted(z.items())} for z in zs],
        }
    return json.dumps(tables, indent=2, sort_keys=True)
