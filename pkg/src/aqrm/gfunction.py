"""Series coefficients and spectral functions for non-degenerate exceptional
eigenvalues of the symmetric model (eps = 0).

At lambda = N - g^2 the local Frobenius solution around the singular point
x = 0 has coefficients K_n obeying a three-term recurrence (K_N = 0,
K_{N+1} = 1). The two local solutions are compared at the midpoint x = 1/2
(the z = 0 patch point, inside both disks of convergence), which yields the
transcendental functions G+ and G-:

    G+-(g, Delta) = -+2(N+1)/Delta
                    + sum_{n>N} K_n (1 +- Delta/(n-N)) (1/2)^(n-N-1).

A zero g of G+ (or G-) at which the level-N constraint polynomial does not
also vanish marks a NON-degenerate eigenvalue lambda = N - g^2; every root
reported here is cross-checked against brute-force diagonalization in the
spectrum module. The series weight (1/2)^(n-N-1) is the patch-point power:
the K_n are normalized for the x-variable series, and evaluating that series
at x = 1/2 is what makes the reported zeros land on true eigenvalues.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .constraint import ConstraintFamily, constraint_poly

#: evaluation point of the x-variable series: x = 1/2, i.e. z = 0
PATCH_X = 0.5

#: hard cap on series length before giving up
N_STOP_MAX = 5000


@dataclass(frozen=True)
class KSeries:
    """Coefficients K_n for n = N..n_stop of the exceptional Frobenius series."""

    N: int
    g: float
    delta: float
    n_stop: int
    coeffs: tuple[float, ...]

    def k(self, n: int) -> float:
        if not self.N <= n <= self.n_stop:
            raise IndexError(f"K_{n} not stored (range {self.N}..{self.n_stop})")
        return self.coeffs[n - self.N]


def _k_next(N: int, g: float, delta: float, n: int, k_n: float,
            k_prev: float) -> float:
    """K_{n+1} from (K_n, K_{n-1}) by the forward recurrence at index n > N."""
    g2x4 = 4.0 * g * g
    return ((g2x4 + n - N + delta * delta / (N - n)) * k_n
            - g2x4 * k_prev) / (n + 1)


def k_series(N: int, g: float, delta: float, n_stop: int) -> KSeries:
    """Forward recurrence in double precision; K_N = 0 and K_{N+1} = 1."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if n_stop <= N + 1:
        raise ValueError("n_stop must exceed N + 1")
    coeffs = [0.0, 1.0]
    for n in range(N + 1, n_stop):
        coeffs.append(_k_next(N, g, delta, n, coeffs[-1], coeffs[-2]))
    return KSeries(N=N, g=g, delta=delta, n_stop=n_stop, coeffs=tuple(coeffs))


def recurrence_residuals(ks: KSeries) -> list[float]:
    """Relative residual of every stored consecutive triple (should be ~0)."""
    g2x4 = 4.0 * ks.g * ks.g
    out = []
    for n in range(ks.N + 1, ks.n_stop):
        lhs = (n + 1) * ks.k(n + 1)
        rhs = ((g2x4 + n - ks.N + ks.delta**2 / (ks.N - n)) * ks.k(n)
               - g2x4 * ks.k(n - 1))
        out.append(abs(lhs - rhs) / max(1.0, abs(ks.k(n))))
    return out


@dataclass(frozen=True)
class GValue:
    """A G-function evaluation with truncation diagnostics."""

    value: float
    n_stop: int
    tail_bound: float
    converged: bool


def _g_series(N: int, g: float, delta: float, tol: float, sign: int) -> GValue:
    """Shared series evaluator; sign=+1 gives G+, sign=-1 gives G-."""
    if delta == 0.0:
        raise ValueError("delta must be nonzero")
    if g < 0.0:
        raise ValueError("g must be nonnegative")
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    total = -sign * 2.0 * (N + 1) / delta
    comp = 0.0  # compensated-summation carry
    k_prev, k_n = 0.0, 1.0  # K_N, K_{N+1}
    weight = 1.0  # (1/2)^(n-N-1) at n = N+1
    small_streak = 0
    term = 0.0
    n = N + 1
    while True:
        term = k_n * (1.0 + sign * delta / (n - N)) * weight
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        # the |total| floor lets evaluation terminate at zeros of G itself
        if abs(term) < tol * max(abs(total), tol):
            small_streak += 1
            if small_streak >= 3 and n >= N + 25:
                break
        else:
            small_streak = 0
        if n - N >= N_STOP_MAX:
            raise RuntimeError(
                f"series did not converge within {N_STOP_MAX} terms "
                f"(g={g} too large for double-precision truncation)")
        k_prev, k_n = k_n, _k_next(N, g, delta, n, k_n, k_prev)
        weight *= PATCH_X
        n += 1
    tail_bound = abs(term) * 10.0
    return GValue(value=total, n_stop=n, tail_bound=tail_bound,
                  converged=tail_bound < 1e-3 * abs(total))


def g_plus(N: int, g: float, delta: float, tol: float = 1e-12) -> GValue:
    """G+ at (g, Delta); zeros give non-degenerate eigenvalues N - g^2."""
    return _g_series(N, g, delta, tol, +1)


def g_minus(N: int, g: float, delta: float, tol: float = 1e-12) -> GValue:
    """G- at (g, Delta); equals G+ at (g, -Delta)."""
    return _g_series(N, g, delta, tol, -1)


def phi_one(N: int, g: float, delta: float, x: float,
            tol: float = 1e-15) -> float:
    """The exceptional Frobenius solution phi_1 evaluated for |x| < 1."""
    if not abs(x) < 1:
        raise ValueError("the series only converges for |x| < 1")
    total = (N + 1) / delta * x**N
    k_prev, k_n = 0.0, 1.0
    power = x ** (N + 1)
    n = N + 1
    while True:
        term = -delta * k_n / (n - N) * power
        total += term
        if abs(term) < tol * max(abs(total), tol) and n >= N + 25:
            return total
        if n - N >= N_STOP_MAX:
            raise RuntimeError("phi_1 series did not converge")
        k_prev, k_n = k_n, _k_next(N, g, delta, n, k_n, k_prev)
        power *= x
        n += 1


# -- root location --------------------------------------------------------------

#: scaled constraint-polynomial magnitude below which a root is suspect of
#: being degenerate (the non-degeneracy statement requires the constraint
#: polynomial to be nonzero there)
DEGENERATE_SUSPECT_TOL = 1e-8


@dataclass(frozen=True)
class ExceptionalRoot:
    """A confirmed sign-change root of G+ or G-."""

    N: int
    delta: float
    g_root: float
    lambda_: float
    parity: str  # "plus" or "minus"
    residual: float


def _scaled_constraint_magnitude(N: int, g: float, delta: float) -> float:
    """|P_N(4g^2, Delta^2)| divided by the positive majorant sum |c_i| x^i."""
    poly = constraint_poly(ConstraintFamily(N, 0), N)
    p = poly.specialize(Fraction(delta) ** 2)
    x = 4 * Fraction(g) ** 2
    value = abs(p(x))
    scale = sum(abs(c) * x**i for i, c in enumerate(p.coeffs))
    return float(value / scale)


def find_exceptional(N: int, delta: float, g_range: tuple[float, float],
                     tol: float = 1e-10) -> list[ExceptionalRoot]:
    """Locate zeros of G+ and G- in g over g_range by grid + bisection.

    Roots where the level-N constraint polynomial also nearly vanishes are
    excluded as degenerate suspects. Each returned root carries
    lambda = N - g^2 and the parity of the vanishing function.
    """
    g_lo, g_hi = g_range
    if not 0 < g_lo < g_hi:
        raise ValueError("need 0 < g_lo < g_hi")
    if delta <= 0:
        raise ValueError("delta must be positive")
    grid = [g_lo + (g_hi - g_lo) * i / 199 for i in range(200)]
    roots: list[ExceptionalRoot] = []
    for parity, func in (("plus", g_plus), ("minus", g_minus)):
        values = [func(N, g, delta).value for g in grid]
        for i in range(199):
            a, b = grid[i], grid[i + 1]
            fa, fb = values[i], values[i + 1]
            if not (math.isfinite(fa) and math.isfinite(fb)) or fa * fb > 0:
                continue
            root, res = _bisect(lambda g: func(N, g, delta).value,
                                a, b, fa, tol)
            if _scaled_constraint_magnitude(N, root, delta) < DEGENERATE_SUSPECT_TOL:
                continue  # degenerate suspect: the constraint polynomial vanishes too
            roots.append(ExceptionalRoot(N=N, delta=delta, g_root=root,
                                         lambda_=N - root * root,
                                         parity=parity, residual=res))
    roots.sort(key=lambda r: r.g_root)
    return roots


def _bisect(func, lo: float, hi: float, f_lo: float,
            tol: float) -> tuple[float, float]:
    mid, f_mid = lo, f_lo
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f_mid = func(mid)
        if abs(f_mid) < tol or hi - lo < 1e-15:
            break
        if (f_mid < 0) == (f_lo < 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return mid, abs(f_mid)
