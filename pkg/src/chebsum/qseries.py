"""q-deformation of the Chebyshev engine.

The continuous q-Hermite family h_n satisfies

    h_{n+1}(x|q) = 2x h_n(x|q) - (1 - q^n) h_{n-1}(x|q),   h_0 = 1, h_1 = 2x

and reduces to U_n at q = 0.  The reversed family is

    b_n(x|q) = (-1)^n q^C(n,2) h_n(x|q^{-1}),
    b_{n+1} = -2 q^n x b_n + q^{n-1}(1 - q^n) b_{n-1},    b_0 = 1, b_1 = -2x

(the recurrence's printed seed b_1 = 1 contradicts the defining relation;
b_0 = 1, b_1 = -2x is forced and closes the recurrence).

b_n is, up to (q)_n, the n-th Taylor coefficient in rho of the infinite
product W_1(x|rho,q) = prod_j (1 - 2 x rho q^j + rho^2 q^{2j}); the bivariate
analog d2_n comes from W_2 = W_1(cos(a+b)) W_1(cos(a-b)) and is assembled as

    d2_n(x,y|q) = sum_m qbinom(n,m) b_m(cos(a+b)) b_{n-m}(cos(a-b))

expanded in the marker basis, where the sines cancel in pairs.

A companion weight for a first-kind q-analog is

    f_t(x|q) = c/(pi sqrt(1-x^2)) * sum_{k>=1} (-1)^(k-1) q^C(k,2) U_{2k-2}(x),
    c = 1/d(q),   d(q) = sum_{k>=1} (-1)^(k-1) q^C(k,2)

whose orthogonal polynomials have the two-term shape
t_n = h_n - ortho_chi_{n-2} h_{n-2}; the constants come from the moments
gamma_n of h_n against f_t.  Every infinite sum here is truncated at an index
K with |q|^C(K,2) below a configurable tail epsilon and each numeric report
carries its truncation bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cheb import ChebIndex, cheb_poly
from .denom import w_rho_coeff_polys
from .errors import ChebsumError, ConvergenceError, DegeneratePivot, DomainError
from .poly import Poly

MAX_TAIL_INDEX = 400


def _comb2(n: int) -> int:
    return n * (n - 1) // 2


class QContext:
    """An exact rational q with |q| < 1 and the caches that depend on it.

    q = 0 is accepted; the recurrences and weight constructions honor it as
    the limit back to the plain Chebyshev case, while operations whose
    formulas divide by q reject it explicitly.
    """

    def __init__(self, q, tail_eps: float = 1e-30):
        q = q if isinstance(q, Fraction) else Fraction(q)
        if abs(q) >= 1:
            raise DomainError(f"|q| must be < 1, got {q}")
        self.q = q
        self.tail_eps = tail_eps
        self._qq: list[Fraction] = [Fraction(1)]          # (q;q)_n
        self._bracket_fact: list[Fraction] = [Fraction(1)]  # [n]_q!
        self._polys: dict = {}

    def __repr__(self):
        return f"QContext(q={self.q})"

    # ----------------------------------------------------------- q-symbols

    def bracket(self, n: int) -> Fraction:
        """[n]_q = 1 + q + ... + q^(n-1)."""
        if n < 0:
            raise ValueError("bracket needs n >= 0")
        return sum((self.q ** j for j in range(n)), Fraction(0))

    def bracket_factorial(self, n: int) -> Fraction:
        while len(self._bracket_fact) <= n:
            m = len(self._bracket_fact)
            self._bracket_fact.append(self._bracket_fact[-1] * self.bracket(m))
        return self._bracket_fact[n]

    def qq(self, n: int) -> Fraction:
        """(q; q)_n, kept consistent with (1-q)^n [n]_q!."""
        while len(self._qq) <= n:
            m = len(self._qq)
            nxt = self._qq[-1] * (1 - self.q ** m)
            assert nxt == (1 - self.q) ** m * self.bracket_factorial(m)
            self._qq.append(nxt)
        return self._qq[n]

    def poch(self, a, n: int) -> Fraction:
        """(a; q)_n = prod_{j<n} (1 - a q^j), with (a; q)_0 = 1."""
        a = Fraction(a)
        out = Fraction(1)
        for j in range(n):
            out *= 1 - a * self.q ** j
        return out

    def binom(self, n: int, k: int) -> Fraction:
        """q-binomial; zero outside 0 <= k <= n."""
        if not 0 <= k <= n:
            return Fraction(0)
        return self.qq(n) / (self.qq(n - k) * self.qq(k))

    def tail_index(self) -> int:
        """Smallest K >= 3 with |q|^C(K,2) < tail_eps."""
        if self.q == 0:
            return 3
        aq = abs(self.q)
        for K in range(3, MAX_TAIL_INDEX + 1):
            if float(aq) ** _comb2(K) < self.tail_eps:
                return K
        raise ConvergenceError(
            f"|q| = {float(aq):.4f} too close to 1 for tail epsilon {self.tail_eps}")


def q_symbols(ctx: QContext, which: str, *args) -> Fraction:
    """Dispatch: bracket(n) | factorial(n) | binomial(n, k) | pochhammer(a, n)."""
    if which == "bracket":
        return ctx.bracket(*args)
    if which == "factorial":
        return ctx.bracket_factorial(*args)
    if which == "binomial":
        return ctx.binom(*args)
    if which == "pochhammer":
        return ctx.poch(*args)
    raise ValueError(f"unknown q-symbol family {which!r}")


# ------------------------------------------------------------ the polynomials


def hb_poly(ctx: QContext, kind: str, n: int) -> Poly:
    """h_n or b_n as an exact polynomial in x1 via its three-term recurrence."""
    if kind not in ("h", "b"):
        raise ValueError(f"kind must be h or b, got {kind!r}")
    if n < 0:
        return Poly.zero(("x1",))
    key = (kind, n)
    if key in ctx._polys:
        return ctx._polys[key]
    x = Poly.variable("x1")
    q = ctx.q
    if kind == "h":
        p0, p1 = Poly.const(1, ("x1",)), 2 * x
        for m in range(1, n):
            p0, p1 = p1, 2 * x * p1 - (1 - q ** m) * p0
    else:
        p0, p1 = Poly.const(1, ("x1",)), -2 * x
        for m in range(1, n):
            p0, p1 = p1, -2 * q ** m * x * p1 + q ** (m - 1) * (1 - q ** m) * p0
    out = p0 if n == 0 else p1
    ctx._polys[key] = out
    return out


def h_values(ctx: QContext, x, count: int) -> list:
    """[h_0(x), ..., h_{count-1}(x)] by rolling the recurrence; float in, float out."""
    if count <= 0:
        return []
    q = float(ctx.q) if isinstance(x, float) else ctx.q
    one = 1.0 if isinstance(x, float) else 1
    vals = [one]
    if count > 1:
        vals.append(2 * x)
    qn = one
    for m in range(1, count - 1):
        qn = qn * q
        vals.append(2 * x * vals[m] - (one - qn) * vals[m - 1])
    return vals


def _univar_coeffs(p: Poly, var: str = "x1") -> list[Fraction]:
    """Dense coefficient list c_0..c_deg of a univariate polynomial."""
    d = p.degree(var)
    out = [Fraction(0)] * (d + 1)
    for exps, c in p.terms.items():
        e = exps[p.vars.index(var)] if var in p.vars else 0
        out[e] += Fraction(c)
    return out


def _compose(p: Poly, arg: Poly, var: str = "x1") -> Poly:
    """p(arg) for univariate p."""
    coeffs = _univar_coeffs(p, var)
    out = Poly.const(coeffs[-1]) if coeffs else Poly.zero()
    for c in reversed(coeffs[:-1]):
        out = out * arg + c
    return out


def d_coeff(ctx: QContext, n: int) -> Poly:
    """(q)_n times the rho^n Taylor coefficient of W_1, via the angle expansion.

    The coefficient equals (-1)^n sum_j qbinom(n, j) q^(C(n,2)+j(j-n))
    e^{i(2j-n)phi} with x = cos(phi); pairing j with n-j folds the
    exponentials into first-kind Chebyshev polynomials.  The result is
    checked against b_n, which it must equal identically.
    """
    key = ("d", n)
    if key in ctx._polys:
        return ctx._polys[key]
    q = ctx.q
    acc = Poly.zero(("x1",))
    for j in range(n // 2 + 1):
        expo = _comb2(n) + j * (j - n)
        w = ctx.binom(n, j) * q ** expo
        basis = cheb_poly(ChebIndex("T", n - 2 * j), var="x1")
        if 2 * j != n:
            acc = acc + 2 * w * basis
        else:
            acc = acc + w * basis
    out = (-1) ** n * acc
    b = hb_poly(ctx, "b", n)
    if out != b:
        raise ChebsumError(f"d_{n} failed to match b_{n} at q={ctx.q}")
    ctx._polys[key] = out
    return out


def d_truncated_product(ctx: QContext, n: int, factors: int) -> Poly:
    """(q)_n [rho^n] prod_{j<factors} (1 - 2 x rho q^j + rho^2 q^{2j}).

    Independent finite-product route; approaches d_n as ``factors`` grows,
    the dropped factors perturbing the coefficient by O(|q|^factors).
    """
    q = ctx.q
    x = Poly.variable("x1", ("x1", "rho"))
    rho = Poly.variable("rho", ("x1", "rho"))
    prod = Poly.const(1, ("x1", "rho"))
    for j in range(factors):
        a = q ** j
        prod = prod * (1 - 2 * a * x * rho + a * a * rho * rho)
        # Truncate above rho^n as we go; higher orders never feed back down.
        prod = Poly(prod.vars, {e: c for e, c in prod.terms.items()
                                if e[prod.vars.index("rho")] <= n}, _clean=False)
    return ctx.qq(n) * prod.coeff_of("rho", n)


def b_values(ctx: QContext, x, count: int) -> list:
    """[b_0(x), ..., b_{count-1}(x)] by rolling the reversed recurrence."""
    if count <= 0:
        return []
    q = float(ctx.q) if isinstance(x, float) else ctx.q
    one = 1.0 if isinstance(x, float) else 1
    vals = [one]
    if count > 1:
        vals.append(-2 * x)
    qm = one  # q^m
    for m in range(1, count - 1):
        qprev = qm
        qm = qm * q
        vals.append(-2 * qm * x * vals[m] + qprev * (one - qm) * vals[m - 1])
    return vals


def d2_values(ctx: QContext, x: float, y: float, count: int) -> list[float]:
    """[d2_0(x,y), ..., d2_{count-1}(x,y)] without symbolic expansion.

    Uses the product decomposition at the sum and difference angles,
    cos(a +/- b) = xy -/+ sqrt(1-x^2) sqrt(1-y^2); identical values to
    evaluating ``d2_coeff``.
    """
    root = math.sqrt(max(0.0, (1 - x * x) * (1 - y * y)))
    cplus, cminus = x * y - root, x * y + root
    bp = b_values(ctx, float(cplus), count)
    bm = b_values(ctx, float(cminus), count)
    out = []
    for m in range(count):
        out.append(sum(float(ctx.binom(m, r)) * bp[r] * bm[m - r] for r in range(m + 1)))
    return out


def d2_coeff(ctx: QContext, n: int) -> Poly:
    """(q)_n times the rho^n Taylor coefficient of W_2, in variables x1, x2.

    Assembled by the product rule from the univariate coefficients at the
    sum and difference angles; the sine markers cancel in pairs.
    """
    key = ("d2", n)
    if key in ctx._polys:
        return ctx._polys[key]
    vars4 = ("x1", "x2", "s1", "s2")
    xx = Poly.variable("x1", vars4) * Poly.variable("x2", vars4)
    ss = Poly.variable("s1", vars4) * Poly.variable("s2", vars4)
    cplus, cminus = xx - ss, xx + ss
    acc = Poly.zero()
    for m in range(n + 1):
        bm = _compose(hb_poly(ctx, "b", m), cplus)
        bn = _compose(hb_poly(ctx, "b", n - m), cminus)
        acc = acc + ctx.binom(n, m) * (bm * bn)
    assert not acc.uses("s1") and not acc.uses("s2"), "markers must cancel in pairs"
    out = acc.drop_vars([v for v in acc.vars if v.startswith("s")])
    want = ("x1", "x2")
    out = out if out.vars == want else out.embed(want)
    ctx._polys[key] = out
    return out


# ------------------------------------------------------------ exact identities


@dataclass(frozen=True)
class IdbResult:
    n: int
    k: int
    residual: Poly
    expected_zero: bool

    @property
    def passed(self) -> bool:
        return self.residual.is_zero()


def idb_check(ctx: QContext, n: int, k: int) -> IdbResult:
    """sum_{j=0}^{n} qbinom(n,j) b_{n-j} h_{j+k}  ==  0 (k < n) or
    (-1)^n q^C(n,2) (q)_k/(q)_{k-n} h_{k-n} (k >= n), checked exactly.

    The sum starts at j = 0; starting at 1 already fails at (n, k) = (1, 0).
    """
    lhs = Poly.zero(("x1",))
    for j in range(n + 1):
        lhs = lhs + ctx.binom(n, j) * (hb_poly(ctx, "b", n - j) * hb_poly(ctx, "h", j + k))
    if k < n:
        rhs = Poly.zero(("x1",))
    else:
        scale = Fraction((-1) ** n) * ctx.q ** _comb2(n) * ctx.qq(k) / ctx.qq(k - n)
        rhs = scale * hb_poly(ctx, "h", k - n)
    return IdbResult(n, k, lhs - rhs, k < n)


# -------------------------------------------------------- weights and moments


@dataclass(frozen=True)
class TruncatedRational:
    """An exact rational value of a truncated sum plus a float tail bound."""

    value: Fraction
    tail_bound: float
    terms: int


def d_of_q(ctx: QContext) -> TruncatedRational:
    """d(q) = sum_{k>=1} (-1)^(k-1) q^C(k,2), truncated at the tail index."""
    K = ctx.tail_index()
    val = sum((Fraction(-1) ** (k - 1) * ctx.q ** _comb2(k) for k in range(1, K + 1)),
              Fraction(0))
    bound = _geom_tail(ctx, K)
    return TruncatedRational(val, bound, K)


def _geom_tail(ctx: QContext, K: int, poly_factor: float = 1.0) -> float:
    aq = abs(float(ctx.q))
    if aq == 0.0:
        return 0.0
    return poly_factor * aq ** _comb2(K + 1) / (1 - aq)


def ft_moment_U(ctx: QContext, n: int) -> TruncatedRational:
    """Moment of U_n against the companion weight f_t.

    Zero for odd n; for even n it is c * sum_k (-1)^(k-1)
    (1 + min(n, 2k-2)) q^C(k,2) with c = 1/d(q), both sums truncated at the
    same index so the n = 0 normalization is exactly 1.
    """
    if n % 2:
        return TruncatedRational(Fraction(0), 0.0, 0)
    K = ctx.tail_index()
    d_val = sum((Fraction(-1) ** (k - 1) * ctx.q ** _comb2(k) for k in range(1, K + 1)),
                Fraction(0))
    if d_val == 0:
        raise DegeneratePivot("d(q) truncation vanished; cannot normalize f_t")
    num = sum((Fraction(-1) ** (k - 1) * (1 + min(n, 2 * k - 2)) * ctx.q ** _comb2(k)
               for k in range(1, K + 1)), Fraction(0))
    return TruncatedRational(num / d_val, _geom_tail(ctx, K, poly_factor=n + 1.0), K)


def hU_coeff(ctx: QContext, n: int, k: int) -> Fraction:
    """Coefficient of U_{n-2k} in the second-kind expansion of h_n."""
    if not 0 <= k <= n // 2:
        return Fraction(0)
    q = ctx.q
    return (q ** k - q ** (n - k + 1)) / (1 - q ** (n - k + 1)) * ctx.binom(n, k)


def gamma_moment(ctx: QContext, n: int) -> TruncatedRational:
    """gamma_n: moment of h_n against f_t (0 for odd n)."""
    if n % 2:
        return TruncatedRational(Fraction(0), 0.0, 0)
    K = ctx.tail_index()
    total = Fraction(0)
    bound = 0.0
    for k in range(n // 2 + 1):
        m = ft_moment_U(ctx, n - 2 * k)
        c = hU_coeff(ctx, n, k)
        total += c * m.value
        bound += abs(float(c)) * m.tail_bound
    return TruncatedRational(total, bound, K)


@dataclass(frozen=True)
class TnResult:
    n: int
    poly: Poly
    gammas: tuple[Fraction, ...]
    ortho_chi: tuple[tuple[int, Fraction], ...]
    tail_index: int
    tail_bound: float


def tn_construct(ctx: QContext, n: int) -> TnResult:
    """The n-th orthogonal polynomial of f_t, as h_n - ortho_chi_{n-2} h_{n-2}.

    Even-index constants come from the zero-mean condition against f_t; odd
    ones from the zero first-moment condition via the expansion of
    2x t_{odd} back into the h family.  A zero pivot in either linear
    condition raises DegeneratePivot.  At q = 0 the construction collapses
    to t_n = U_n - U_{n-2} = 2 T_n for n >= 2.
    """
    gammas = [gamma_moment(ctx, m) for m in range(n + 2)]
    g = [t.value for t in gammas]
    chis: dict[int, Fraction] = {}
    for m in range(0, max(0, n - 1)):
        if (m + 2) % 2 == 0:
            if g[m] == 0:
                raise DegeneratePivot(f"gamma_{m} = 0 while determining ortho_chi_{m}")
            chis[m] = g[m + 2] / g[m]
        else:
            den = g[m + 1] + (1 - ctx.q ** m) * g[m - 1]
            if den == 0:
                raise DegeneratePivot(f"zero pivot for ortho_chi_{m}")
            chis[m] = (g[m + 3] + (1 - ctx.q ** (m + 2)) * g[m + 1]) / den
    if n <= 1:
        poly = hb_poly(ctx, "h", n)
    else:
        poly = hb_poly(ctx, "h", n) - chis[n - 2] * hb_poly(ctx, "h", n - 2)
    K = ctx.tail_index()
    bound = max((t.tail_bound for t in gammas), default=0.0)
    return TnResult(n, poly, tuple(g), tuple(sorted(chis.items())), K, bound)


def ft_u_coeffs(ctx: QContext) -> list[Fraction]:
    """Truncated U-expansion of f_t: coefficient of U_{2k-2} for k = 1..K, times c."""
    K = ctx.tail_index()
    d_val = sum((Fraction(-1) ** (k - 1) * ctx.q ** _comb2(k) for k in range(1, K + 1)),
                Fraction(0))
    return [Fraction(-1) ** (k - 1) * ctx.q ** _comb2(k) / d_val for k in range(1, K + 1)]


def poly_to_u_basis(p: Poly, var: str = "x1") -> list[Fraction]:
    """Coefficients c_j with p = sum c_j U_j, by leading-term peeling."""
    coeffs = _univar_coeffs(p, var)
    out = [Fraction(0)] * len(coeffs)
    dense = [Fraction(c) for c in coeffs]
    for d in range(len(dense) - 1, -1, -1):
        c = dense[d]
        if c == 0:
            continue
        lead = Fraction(2) ** d
        w = c / lead
        out[d] = w
        for e, uc in enumerate(_univar_coeffs(cheb_poly(ChebIndex("U", d), var=var), var)):
            dense[e] -= w * uc
    assert all(c == 0 for c in dense)
    return out


def ft_inner_product(ctx: QContext, p: Poly, var: str = "x1") -> Fraction:
    """Exact integral of p against the truncated f_t, via U-basis moments."""
    return sum((c * ft_moment_U(ctx, j).value
                for j, c in enumerate(poly_to_u_basis(p, var)) if c != 0),
               Fraction(0))


# ------------------------------------------------------------- numeric checks


def w1_product_value(ctx: QContext, x: float, rho: float, factors: int) -> float:
    q = float(ctx.q)
    out = 1.0
    a = rho
    for _ in range(factors):
        out *= 1 - 2 * a * x + a * a
        a *= q
    return out


@dataclass(frozen=True)
class IdentityReport:
    lhs: float
    rhs: float
    abs_diff: float
    bound: float

    @property
    def passed(self) -> bool:
        return self.abs_diff <= max(self.bound, 1e-9)


def chi1t_check(ctx: QContext, t: int, x: float, rho: float,
                J: int = 80, factors: int = 60) -> IdentityReport:
    """Truncated sum_{j} rho^j/(q)_j h_{t+j}(x) against its closed form.

    The closed side is (1/W_1) sum_{j<=t} qbinom(t,j) (-rho)^j q^C(j,2)
    h_{t-j}(x) with W_1 truncated to ``factors`` quadratic factors.
    """
    if abs(rho) >= 1:
        raise DomainError(f"|rho| must be < 1, got {rho}")
    q = float(ctx.q)
    hv = h_values(ctx, float(x), t + J + 2)
    qqf = [1.0]
    for m in range(1, J + 1):
        qqf.append(qqf[-1] * (1 - q ** m))
    lhs = sum(rho ** j / qqf[j] * hv[t + j] for j in range(J + 1))
    w1 = w1_product_value(ctx, float(x), rho, factors)
    rhs = sum(float(ctx.binom(t, j)) * (-rho) ** j * q ** _comb2(j) * hv[t - j]
              for j in range(t + 1)) / w1
    # Tail: |h_m(x)| <= m+1 on [-1,1]; the series tail is geometric over the
    # smallest (q)_j, the product tail is first order in rho q^factors.
    qq_floor = min(qqf) if min(qqf) > 0 else 1.0
    series_tail = abs(rho) ** (J + 1) * (t + J + 2) / ((1 - abs(rho)) * qq_floor)
    product_tail = abs(2 * rho) * abs(q) ** factors / max(1e-12, (1 - abs(q))) * abs(rhs)
    return IdentityReport(lhs, rhs, abs(lhs - rhs), series_tail + product_tail + 1e-12)


def final_identity_check(ctx: QContext, x: float, y: float, rho: float,
                         J: int = 20) -> IdentityReport:
    """Bivariate reduction identity:

        sum_j rho^j/(q)_j sum_m qbinom(j,m) d2_m(x,y) h_{j-m}(x) h_{j-m}(y)
            == sum_k (-1)^k q^C(k,2) rho^{2k}/(q)_k

    evaluated with truncations on both sides.
    """
    if abs(rho) >= 1:
        raise DomainError(f"|rho| must be < 1, got {rho}")
    q = float(ctx.q)
    hx = h_values(ctx, float(x), J + 1)
    hy = h_values(ctx, float(y), J + 1)
    d2v = d2_values(ctx, float(x), float(y), J + 1)
    qqf = [1.0]
    for m in range(1, J + 1):
        qqf.append(qqf[-1] * (1 - q ** m))
    lhs = 0.0
    for j in range(J + 1):
        inner = 0.0
        for m in range(j + 1):
            inner += float(ctx.binom(j, m)) * d2v[m] * hx[j - m] * hy[j - m]
        lhs += rho ** j / qqf[j] * inner
    kmax = J // 2 + 40
    qq_long = [1.0]
    for m in range(1, kmax + 1):
        qq_long.append(qq_long[-1] * (1 - q ** m))
    rhs = 0.0
    for k in range(kmax):
        term = (-1) ** k * q ** _comb2(k) * rho ** (2 * k) / qq_long[k]
        rhs += term
        if abs(term) < 1e-18 and k > 2:
            break
    qq_floor = min(qqf)
    bound = (abs(rho) ** (J + 1) * (J + 2) ** 2 * 4.0 / ((1 - abs(rho)) * qq_floor ** 2)
             + 1e-12)
    return IdentityReport(lhs, rhs, abs(lhs - rhs), bound)


def fh_integral_check(ctx: QContext, nodes: int = 128) -> IdentityReport:
    """The displayed expansion of the q-Hermite weight integrates to 1."""
    from .quadrature import cheb2_nodes_weights

    K = ctx.tail_index()
    q = float(ctx.q)
    xs, ws = cheb2_nodes_weights(nodes)
    total = 0.0
    for xv, wv in zip(xs, ws):
        g = 0.0
        u0, u1 = 1.0, 2 * xv
        uvals = [u0, u1]
        for m in range(2, 2 * K):
            uvals.append(2 * xv * uvals[-1] - uvals[-2])
        for k in range(1, K + 1):
            g += (-1) ** (k - 1) * q ** _comb2(k) * uvals[2 * k - 2]
        total += wv * (2 / math.pi) * g
    return IdentityReport(total, 1.0, abs(total - 1.0), _geom_tail(ctx, K) + 1e-10)


# ---------------------------------------------------------------- conjectures


def _beta_solve(ctx: QContext, n: int) -> dict:
    """Express d2_n in the diagonal b (x) b basis, exactly."""
    if ctx.q == 0:
        raise DomainError("the diagonal expansion divides by powers of q; need q != 0")
    target = Fraction((-1) ** n) * ctx.q ** _comb2(n) * d2_coeff(ctx, n)
    betas: list[Fraction] = []
    residual = target
    for j in range(n // 2 + 1):
        deg = n - 2 * j
        basis = hb_poly(ctx, "b", deg)
        bb = basis * basis.rename({"x1": "x2"})
        lead = Fraction(-2) ** deg * ctx.q ** _comb2(deg)
        want = ("x1", "x2")
        top = residual.embed(want) if residual.vars != want else residual
        c = Fraction(top.terms.get((deg, deg), 0)) / (lead * lead)
        betas.append(c)
        residual = residual - c * bb
    return {
        "n": n,
        "q": str(ctx.q),
        "beta": [str(b) for b in betas],
        "representable": residual.is_zero(),
        "residual_terms": len(residual.terms),
        "residual": residual,
    }


def _fit_polynomial_in_q(samples: list[tuple[Fraction, Fraction]]) -> str | None:
    """Interpolate beta(q) by a polynomial using all but one sample, then verify."""
    if len(samples) < 3:
        return None
    fit_pts, check = samples[:-1], samples[-1]
    m = len(fit_pts)
    # Solve the Vandermonde system exactly.
    rows = [[qv ** i for i in range(m)] + [val] for qv, val in fit_pts]
    for c in range(m):
        piv = next((r for r in range(c, m) if rows[r][c] != 0), None)
        if piv is None:
            return None
        rows[c], rows[piv] = rows[piv], rows[c]
        for r in range(m):
            if r != c and rows[r][c] != 0:
                f = rows[r][c] / rows[c][c]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[c])]
    coeffs = [rows[i][m] / rows[i][i] for i in range(m)]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if sum(c * check[0] ** i for i, c in enumerate(coeffs)) != check[1]:
        return None
    parts = []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        head = str(c) if i == 0 else (f"{c}*q" if i == 1 else f"{c}*q^{i}")
        parts.append(head)
    return " + ".join(parts) if parts else "0"


def conjecture_probe(which: str, **params) -> dict:
    """Numeric/exact probes of the two open claims; always returns a report.

    which = "beta-expansion": solve for the diagonal b-basis coefficients of
    d2_n at each rational q in ``q_values`` and attempt a polynomial-in-q fit.

    which = "common-denominator": multiply the truncated mixed series by the
    truncated candidate denominator product and report which rho coefficients
    above the expected numerator degree persist beyond the truncation bound.
    """
    if which == "beta-expansion":
        n = params["n"]
        q_values = [Fraction(q) for q in params.get("q_values", (Fraction(1, 2),
                                                                Fraction(1, 3),
                                                                Fraction(2, 5),
                                                                Fraction(3, 7)))]
        per_q = []
        sample_sets: list[list[tuple[Fraction, Fraction]]] = []
        for q in q_values:
            res = _beta_solve(QContext(q), n)
            res.pop("residual")
            per_q.append(res)
            for j, b in enumerate(res["beta"]):
                while len(sample_sets) <= j:
                    sample_sets.append([])
                sample_sets[j].append((q, Fraction(b)))
        fits = [_fit_polynomial_in_q(s) for s in sample_sets]
        return {
            "conjecture": "beta-expansion",
            "n": n,
            "per_q": per_q,
            "verdict": ("REPRESENTABLE" if all(r["representable"] for r in per_q)
                        else "UNREPRESENTABLE"),
            "beta_fits_in_q": fits,
        }
    if which == "common-denominator":
        return _common_denominator_probe(**params)
    raise ValueError(f"unknown conjecture probe {which!r}")


def _common_denominator_probe(n_h: int = 1, m_t: int = 0, q=Fraction(1, 3),
                              xs: Sequence = (Fraction(2, 5), Fraction(-1, 3)),
                              rho_order: int = 12, factors: int = 30) -> dict:
    """Multiply the mixed h/t series by the truncated denominator product.

    The candidate denominator is prod_{i<factors} w_{n+m}(x.. | rho q^i); if
    the conjectured form holds with a polynomial-type numerator, every rho
    coefficient above degree 2^(n_h+m_t) - 1 decays like q^factors.  Pure-h
    cases are known: (1,0) leaves exactly 1 and (2,0) leaves the theta-like
    even series, so persistent coefficients there are expected and reported.
    """
    arity = n_h + m_t
    if arity < 1 or arity > 2:
        raise DomainError("probe supports n_h + m_t in {1, 2}")
    if rho_order > 12:
        raise DomainError("rho_order capped at 12")
    ctx = QContext(q)
    pts = [Fraction(v) for v in xs[:arity]]
    if len(pts) < arity:
        raise DomainError(f"need {arity} coordinates")
    # Series coefficients a_j, exact.
    h_at = [[hb_poly(ctx, "h", j).eval({"x1": p}) for j in range(rho_order + 1)]
            for p in pts[:n_h]]
    t_at = [[tn_construct(ctx, j).poly.eval({"x1": p}) for j in range(rho_order + 1)]
            for p in pts[n_h:]]
    a = []
    for j in range(rho_order + 1):
        v = Fraction(1) / ctx.qq(j)
        for row in h_at:
            v *= row[j]
        for row in t_at:
            v *= row[j]
        a.append(v)
    # Denominator coefficients, exact.
    point = {f"x{i + 1}": p for i, p in enumerate(pts)}
    base = [c.eval(point) for c in w_rho_coeff_polys(arity)]
    den = [Fraction(1)] + [Fraction(0)] * rho_order
    for i in range(factors):
        qi = ctx.q ** i
        fac = [Fraction(c) * qi ** m for m, c in enumerate(base)]
        new = [Fraction(0)] * (rho_order + 1)
        for r1, c1 in enumerate(den):
            if c1 == 0:
                continue
            for r2, c2 in enumerate(fac):
                if r1 + r2 > rho_order:
                    break
                new[r1 + r2] += c1 * c2
        den = new
    out = [Fraction(0)] * (rho_order + 1)
    for r1, c1 in enumerate(a):
        for r2, c2 in enumerate(den):
            if r1 + r2 > rho_order:
                break
            out[r1 + r2] += c1 * c2
    expected_degree = 2 ** arity - 1
    scale = max(abs(float(v)) for v in a) or 1.0
    bound = 8.0 * scale * float(abs(ctx.q)) ** factors / max(1e-12, 1 - float(abs(ctx.q)))
    rows = []
    for r, v in enumerate(out):
        rows.append({
            "order": r,
            "value": float(v),
            "exact": str(v),
            "above_expected_degree": r > expected_degree,
            "persists": r > expected_degree and abs(float(v)) > bound,
        })
    persisting = [r for r in rows if r["persists"]]
    decay = [abs(b["value"]) / abs(a["value"])
             for a, b in zip(persisting, persisting[1:]) if a["value"] != 0.0]
    return {
        "conjecture": "common-denominator",
        "n_h": n_h,
        "m_t": m_t,
        "q": str(q),
        "xs": [str(p) for p in pts],
        "factors": factors,
        "expected_numerator_degree": expected_degree,
        "bound": bound,
        "coefficients": rows,
        "all_above_vanish": all(not r["persists"] for r in rows),
        "persisting_decay_ratios": decay,
    }
