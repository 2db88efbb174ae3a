"""Closed forms for the mixed Chebyshev generating functions.

A spec (k, n, t) describes the power series in rho whose j-th coefficient is

    prod_{s=1..k} T_{j+t_s}(x_s) * prod_{s=k+1..k+n} U_{j+t_s}(x_s)

(first-kind slots first).  The series sums to a rational function l / w where
w = w_{k+n} is the common denominator of arity k+n and the numerator l is the
rho-truncation of the convolution of w's rho-coefficients with the Chebyshev
product sequence:

    l = sum_{j=0}^{2^(k+n)-1} rho^j sum_{m=0}^{j} [rho^m](w) * P_{j-m},
    P_i = prod T_{i+t_s}(x_s) prod U_{i+t_s}(x_s)

with negative shifted indices mapped by T_{-i} = T_i, U_{-i} = -U_{i-2}.
The same convolution must vanish identically at every order above
2^(k+n) - 1, which is checked by ``series_convolution_residual``.

Three independent evaluation paths are provided: the closed form, a
truncated-series oracle, and a sign-vector expansion over angles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .cheb import ChebIndex, cheb_poly, cheb_seq, cheb_seq_grid
from .denom import build_w, w_rho_coeff_polys
from .errors import DomainError, ScaleError, SingularAngle
from .poly import Poly

MAX_SLOTS = 4


@dataclass(frozen=True)
class GenSpec:
    """k first-kind slots, n second-kind slots, one integer shift per slot."""

    k: int
    n: int
    t: tuple[int, ...]

    def __post_init__(self):
        if self.k < 0 or self.n < 0 or self.k + self.n < 1:
            raise ValueError("need k, n >= 0 and k + n >= 1")
        object.__setattr__(self, "t", tuple(self.t))
        if len(self.t) != self.k + self.n:
            raise ValueError(f"shift vector has {len(self.t)} entries, need {self.k + self.n}")

    @property
    def slots(self) -> int:
        return self.k + self.n

    def kind(self, s: int) -> str:
        """Kind of 1-based slot s."""
        return "T" if s <= self.k else "U"


@dataclass(frozen=True)
class RationalFn:
    """numerator / denominator with the denominator of matching arity."""

    numerator: Poly
    denominator: Poly

    def eval(self, point):
        den = self.denominator.eval(point)
        return self.numerator.eval(point) / den


def _check_scale(spec: GenSpec) -> None:
    if spec.slots > MAX_SLOTS:
        raise ScaleError(f"k + n = {spec.slots} exceeds the supported maximum {MAX_SLOTS}")


def _product_polys(spec: GenSpec, count: int) -> list[Poly]:
    """P_0 .. P_{count-1} as exact polynomials in x1..x_{k+n}."""
    out = []
    for i in range(count):
        p = Poly.const(1)
        for s in range(1, spec.slots + 1):
            p = p * cheb_poly(ChebIndex(spec.kind(s), i + spec.t[s - 1]), var=f"x{s}")
        out.append(p)
    return out


@lru_cache(maxsize=512)
def _numerator_cached(k: int, n: int, t: tuple[int, ...]) -> Poly:
    spec = GenSpec(k, n, t)
    K = spec.slots
    order = 2 ** K
    coeffs = w_rho_coeff_polys(K)
    prods = _product_polys(spec, order)
    rho = Poly.variable("rho")
    rho_pows = [Poly.const(1)] + [rho ** j for j in range(1, order)]
    acc = Poly.zero()
    for m, cm in enumerate(coeffs):
        if cm.is_zero() or m >= order:
            continue
        for i in range(order - m):
            if prods[i].is_zero():
                continue
            acc = acc + (cm * prods[i]) * rho_pows[m + i]
    want = tuple([f"x{i}" for i in range(1, K + 1)] + ["rho"])
    return acc if acc.vars == want else acc.embed(want)


def numerator_l(spec: GenSpec) -> Poly:
    """Exact numerator polynomial of the closed form."""
    _check_scale(spec)
    return _numerator_cached(spec.k, spec.n, spec.t)


def chi_closed(spec: GenSpec) -> RationalFn:
    """The closed rational form numerator_l / w_{k+n}."""
    _check_scale(spec)
    return RationalFn(numerator_l(spec), build_w(spec.slots).poly)


def series_convolution_residual(spec: GenSpec, order: int) -> Poly:
    """sum_m [rho^m](w) * P_{order-m}; identically zero for order >= 2^(k+n).

    This is the rho^order coefficient of w * chi - l as a formal power series.
    """
    _check_scale(spec)
    coeffs = w_rho_coeff_polys(spec.slots)
    prods = _product_polys(spec, order + 1)
    acc = Poly.zero()
    for m, cm in enumerate(coeffs):
        if m > order or cm.is_zero():
            continue
        acc = acc + cm * prods[order - m]
    if order < 2 ** spec.slots:
        acc = acc - numerator_l(spec).coeff_of("rho", order)
    return acc


# ----------------------------------------------------------- numeric closed form


def _domain_check(spec: GenSpec, xs: Sequence[float], rho: float) -> None:
    if len(xs) != spec.slots:
        raise DomainError(f"need {spec.slots} coordinates, got {len(xs)}")
    if abs(rho) >= 1:
        raise DomainError(f"|rho| must be < 1, got {rho}")
    for x in xs:
        if abs(x) > 1:
            raise DomainError(f"|x_i| must be <= 1, got {x}")


def chi_closed_value(spec: GenSpec, xs: Sequence, rho):
    """Evaluate the closed form at a point without expanding the numerator.

    The denominator's rho-coefficients and the Chebyshev products are
    evaluated first and convolved numerically, which is the same l / w value
    the symbolic path produces.  Exact inputs give an exact value.
    """
    _check_scale(spec)
    K = spec.slots
    order = 2 ** K
    point = {f"x{i + 1}": xs[i] for i in range(K)}
    wc = [c.eval(point) for c in w_rho_coeff_polys(K)]
    prods = _product_values(spec, order, xs)
    num = 0
    rp = 1
    for j in range(order):
        cj = 0
        for m in range(j + 1):
            cj += wc[m] * prods[j - m]
        num += rp * cj
        rp *= rho
    den = 0
    rp = 1
    for c in wc:
        den += c * rp
        rp *= rho
    return num / den


def _product_values(spec: GenSpec, count: int, xs: Sequence) -> list:
    rows = [cheb_seq(spec.kind(s), spec.t[s - 1], count, xs[s - 1])
            for s in range(1, spec.slots + 1)]
    out = []
    for i in range(count):
        v = rows[0][i]
        for r in rows[1:]:
            v = v * r[i]
        out.append(v)
    return out


def chi_closed_values_grid(spec: GenSpec, xs_arrays, rho_array):
    """Vectorized float closed-form evaluation over numpy arrays."""
    import numpy as np

    K = spec.slots
    order = 2 ** K
    arrays = {f"x{i + 1}": np.asarray(a, dtype=float) for i, a in enumerate(xs_arrays)}
    rho = np.asarray(rho_array, dtype=float)
    wc = [c.eval_grid(arrays) for c in w_rho_coeff_polys(K)]
    rows = [cheb_seq_grid(spec.kind(s), spec.t[s - 1], order, arrays[f"x{s}"])
            for s in range(1, K + 1)]
    prods = rows[0].copy()
    for r in rows[1:]:
        prods = prods * r
    num = 0.0
    rp = 1.0
    for j in range(order):
        cj = 0.0
        for m in range(j + 1):
            cj = cj + wc[m] * prods[j - m]
        num = num + rp * cj
        rp = rp * rho
    den = 0.0
    rp = 1.0
    for c in wc:
        den = den + c * rp
        rp = rp * rho
    return num / den


# ------------------------------------------------------------------ series oracle


def chi_series_oracle(spec: GenSpec, xs: Sequence[float], rho: float, J: int) -> float:
    """Truncated defining series sum_{j<=J} rho^j P_j(xs).

    Tail bound: |P_j| <= prod_s (j + t_s + 1) for |x| <= 1, so the truncation
    error is at most sum_{j>J} |rho|^j prod_s (j + |t_s| + 1); see
    ``chi_series_tail_bound``.
    """
    _domain_check(spec, xs, rho)
    rows = [cheb_seq(spec.kind(s), spec.t[s - 1], J + 1, xs[s - 1])
            for s in range(1, spec.slots + 1)]
    total = 0.0
    rp = 1.0
    for j in range(J + 1):
        term = rp
        for r in rows:
            term *= r[j]
        total += term
        rp *= rho
    return total


def chi_series_tail_bound(spec: GenSpec, rho: float, J: int) -> float:
    """Upper bound on the truncation error of ``chi_series_oracle``."""
    r = abs(rho)
    if r >= 1:
        raise DomainError("tail bound needs |rho| < 1")
    shifts = [abs(t) for t in spec.t]
    total = 0.0
    term_at = lambda j: r ** j * math.prod(j + ts + 1 for ts in shifts)
    # Sum explicitly until the polynomial factor is dominated, then close
    # with a geometric majorant.
    j = J + 1
    while True:
        t = term_at(j)
        total += t
        grow = term_at(j + 1)
        if grow < t and grow / t < (1 + r) / 2:
            total += grow / (1 - (1 + r) / 2)
            break
        j += 1
        if j > J + 10000:  # pragma: no cover
            break
    return total


def chi_series_oracle_grid(spec: GenSpec, xs_arrays, rho_array, J: int):
    """Vectorized truncated series over numpy arrays."""
    import numpy as np

    rho = np.asarray(rho_array, dtype=float)
    rows = [cheb_seq_grid(spec.kind(s), spec.t[s - 1], J + 1, xs_arrays[s - 1])
            for s in range(1, spec.slots + 1)]
    prods = rows[0].copy()
    for r in rows[1:]:
        prods = prods * r
    total = np.zeros(rho.shape)
    rp = np.ones(rho.shape)
    for j in range(J + 1):
        total = total + rp * prods[j]
        rp = rp * rho
    return total


# ----------------------------------------------------------------- angle formula


def chi_angle_eval(spec: GenSpec, alphas: Sequence[float], rho: float) -> float:
    """Sign-vector closed form evaluated directly from angles.

    Agrees with the closed form at x_i = cos(alpha_i).  For every sign vector
    i over the slots the contribution is

        (-1)^(sum over U slots of (i_s+1)/2)
        * (trig(B') - rho*trig(B'-A)) / (1 - 2 rho cos(A) + rho^2)

    with A = sum i_s alpha_s and B' shifting U slots by t_s + 1 and T slots by
    t_s; trig is sin for an odd number of U slots and cos otherwise, and the
    total is scaled by the product-to-sum prefactor and divided by the sines
    of the U-slot angles.
    """
    _check_scale(spec)
    K = spec.slots
    if len(alphas) != K:
        raise DomainError(f"need {K} angles, got {len(alphas)}")
    if abs(rho) >= 1:
        raise DomainError(f"|rho| must be < 1, got {rho}")
    n = spec.n
    u_slots = range(spec.k, K)
    sin_prod = 1.0
    for s in u_slots:
        sa = math.sin(alphas[s])
        if sa == 0.0:
            raise SingularAngle(f"sin(alpha_{s + 1}) = 0; use the closed form instead")
        sin_prod *= sa
    trig = math.sin if n % 2 else math.cos
    global_sign = (-1) ** ((n + 1) // 2) if n % 2 else (-1) ** (n // 2)
    total = 0.0
    for bits in range(2 ** K):
        signs = [1 if (bits >> s) & 1 else -1 for s in range(K)]
        A = sum(i * a for i, a in zip(signs, alphas))
        Bp = 0.0
        parity = 0
        for s in range(K):
            shift = spec.t[s] + (1 if s >= spec.k else 0)
            Bp += signs[s] * shift * alphas[s]
            if s >= spec.k:
                parity += (signs[s] + 1) // 2
        num = trig(Bp) - rho * trig(Bp - A)
        den = 1 - 2 * rho * math.cos(A) + rho * rho
        total += (-1) ** parity * num / den
    return global_sign * total / (2 ** K * sin_prod)


# ------------------------------------------------------------- marginal checks


@dataclass(frozen=True)
class MarginalReport:
    """Quadrature check of the weighted integrals of chi_{n,0}."""

    n: int
    j: int
    nodes: int
    rho_values: tuple[float, ...]
    max_abs_dev_from_one: float
    max_abs_dev_from_lower_order: float | None
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_abs_dev_from_one <= self.tol


def marginal_check(n: int, j: int, nodes: int = 128, tol: float = 1e-9,
                   rho_values: Sequence[float] = (-0.9, -0.5, 0.5, 0.9),
                   grid_points: int = 7) -> MarginalReport:
    """Integrate chi_{n,0} against the first-kind weight in j coordinates.

    Orthogonality kills every positive-order term of the series, so the
    weighted j-fold integral equals 1 identically in the remaining
    coordinates and rho; the report also records how far the integral sits
    from the lower-order function chi_{n-j,0} of the remaining coordinates
    (an alternative reading that the data rejects; it is reported, not
    asserted).
    """
    import numpy as np

    if not 1 <= j <= n:
        raise ValueError("need 1 <= j <= n")
    if n > 3:
        raise ScaleError("marginal checks supported for n <= 3")
    spec = GenSpec(n, 0, (0,) * n)
    theta = (2 * np.arange(1, nodes + 1) - 1) * math.pi / (2 * nodes)
    quad_nodes = np.cos(theta)
    rest = np.linspace(-0.95, 0.95, grid_points)
    axes = [quad_nodes] * j + [rest] * (n - j)
    mesh = np.meshgrid(*axes, indexing="ij", sparse=True)
    max_dev_one = 0.0
    max_dev_lower = 0.0 if j < n else None
    for rho in rho_values:
        vals = chi_closed_values_grid(spec, mesh, np.asarray(rho))
        integral = vals.mean(axis=tuple(range(j)))
        max_dev_one = max(max_dev_one, float(np.max(np.abs(integral - 1.0))))
        if j < n:
            lower = GenSpec(n - j, 0, (0,) * (n - j))
            rest_mesh = np.meshgrid(*([rest] * (n - j)), indexing="ij", sparse=True)
            lower_vals = chi_closed_values_grid(lower, rest_mesh, np.asarray(rho))
            max_dev_lower = max(max_dev_lower,
                                float(np.max(np.abs(integral - lower_vals))))
    return MarginalReport(n, j, nodes, tuple(float(r) for r in rho_values),
                          max_dev_one, max_dev_lower, tol)


def positivity_grid_min(n: int, grid_points: int = 11,
                        rho_values: Sequence[float] = (-0.9, -0.5, 0.5, 0.9)) -> float:
    """Minimum of chi_{n,0} over a uniform grid on [-1,1]^n x the rho set."""
    import numpy as np

    spec = GenSpec(n, 0, (0,) * n)
    axis = np.linspace(-1.0, 1.0, grid_points)
    mesh = np.meshgrid(*([axis] * n), indexing="ij", sparse=True)
    best = math.inf
    for rho in rho_values:
        vals = chi_closed_values_grid(spec, mesh, np.asarray(rho))
        best = min(best, float(vals.min()))
    return best
