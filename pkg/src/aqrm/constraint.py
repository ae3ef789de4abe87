"""Constraint polynomials, their tridiagonal matrices, and crossing records.

The quasi-exact (degenerate) part of the exceptional spectrum lives at
eigenvalues lambda = N - g^2 + eps whose coupling values are positive roots of
a constraint polynomial P_N in x = (2g)^2 and d = Delta^2. Two variants exist,
here called plain and tilde; they are exchanged by negating eps. This module
builds both families exactly, exposes the tridiagonal matrices whose
continuants generate them, locates crossings at fixed d, reconstructs kernel
vectors at roots, and hosts the exact divisibility verifiers that relate the
two families at half-integer eps.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exactpoly import (BivarPoly, UniPoly, isolate_positive_roots,
                        poly_div_x, refine_isolated, to_fraction)

PLAIN = "plain"
TILDE = "tilde"

#: default positivity-sampling grid for verify_conjecture: all x > 0
DEFAULT_GRID: tuple[tuple[Fraction, Fraction], ...] = tuple(
    (xv, dv)
    for xv in (Fraction(1, 10), Fraction(1), Fraction(10), Fraction(100))
    for dv in (Fraction(1, 4), Fraction(1), Fraction(4)))


@dataclass(frozen=True)
class ConstraintFamily:
    """One constraint-polynomial family: level N, bias two_eps = 2*eps, variant."""

    N: int
    two_eps: int
    variant: str = PLAIN

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be a positive integer")
        if self.variant not in (PLAIN, TILDE):
            raise ValueError(f"unknown variant {self.variant!r}")

    @property
    def eps(self) -> Fraction:
        return Fraction(self.two_eps, 2)


def _poly_sequence(N: int, two_eps_eff: int, k_max: int) -> list[BivarPoly]:
    """P_0..P_k_max by the three-term recurrence.

    P_0 = 1 and
    P_k = [k x + d - k^2 - k*two_eps_eff] P_{k-1} - k(k-1)(N-k+1) x P_{k-2};
    the tilde variant is this recurrence with two_eps_eff negated.
    """
    x, d = BivarPoly.x(), BivarPoly.d()
    seq = [BivarPoly.const(1)]
    prev2 = BivarPoly.zero()
    for k in range(1, k_max + 1):
        head = k * x + d - BivarPoly.const(k * k + k * two_eps_eff)
        p = head * seq[-1] - (k * (k - 1) * (N - k + 1)) * x * prev2
        prev2 = seq[-1]
        seq.append(p)
    return seq


def constraint_poly(fam: ConstraintFamily, k: int) -> BivarPoly:
    """The exact k-th constraint polynomial of the family (degree k in x)."""
    if not 0 <= k <= fam.N:
        raise ValueError(f"k={k} out of range 0..{fam.N}")
    eff = fam.two_eps if fam.variant == PLAIN else -fam.two_eps
    return _poly_sequence(fam.N, eff, k)[k]


@dataclass(frozen=True)
class TridiagSpec:
    """Entries of the (k+1)x(k+1) tridiagonal matrix behind the continuants.

    Row r holds diag[r] on the diagonal, sup[r] at (r, r+1) and sub[r] at
    (r, r-1); entries are exact polynomials in x and d.
    """

    size: int
    diag: tuple[BivarPoly, ...]
    sup: tuple[BivarPoly, ...]
    sub: tuple[BivarPoly, ...]

    def dense(self, x_value, d_value) -> np.ndarray:
        """Specialized dense float matrix at numeric (x, d)."""
        m = np.zeros((self.size, self.size))
        for r in range(self.size):
            m[r, r] = float(self.diag[r].evaluate(x_value, d_value))
            if r + 1 < self.size:
                m[r, r + 1] = float(self.sup[r].evaluate(x_value, d_value))
            if r >= 1:
                m[r, r - 1] = float(self.sub[r - 1].evaluate(x_value, d_value))
        return m


def tridiag_matrix(fam: ConstraintFamily, k: int) -> TridiagSpec:
    """Tridiagonal matrix whose continuant equals (-1)^k (-d) P_k."""
    if not 0 <= k <= fam.N:
        raise ValueError(f"k={k} out of range 0..{fam.N}")
    x, d = BivarPoly.x(), BivarPoly.d()
    sign = 1 if fam.variant == PLAIN else -1
    diag = tuple(
        BivarPoly.const(r * r + sign * r * fam.two_eps) - r * x - d
        for r in range(k + 1))
    if fam.variant == PLAIN:
        sup = tuple((r + 1) * x for r in range(k))
        sub = tuple(BivarPoly.const((fam.N - r + 1) * (r - 1))
                    for r in range(1, k + 1))
    else:
        sup = tuple(r * x for r in range(k))
        sub = tuple(BivarPoly.const((fam.N - r + 1) * r)
                    for r in range(1, k + 1))
    return TridiagSpec(size=k + 1, diag=diag, sup=sup, sub=sub)


def continuant(fam: ConstraintFamily, k: int) -> BivarPoly:
    """Exact determinant of tridiag_matrix(fam, k) via the continuant recurrence."""
    spec = tridiag_matrix(fam, k)
    det_prev, det = BivarPoly.const(1), spec.diag[0]
    for r in range(1, k + 1):
        det, det_prev = (spec.diag[r] * det
                         - spec.sup[r - 1] * spec.sub[r - 1] * det_prev), det
    return det


# -- crossings ---------------------------------------------------------------

@dataclass(frozen=True)
class CrossingRecord:
    """An isolated positive root of a constraint polynomial at fixed d."""

    N: int
    two_eps: int
    d_value: Fraction
    root_interval: tuple[Fraction, Fraction]
    rep_pair: tuple[str, str] | None

    @property
    def x_root(self) -> Fraction:
        lo, hi = self.root_interval
        return (lo + hi) / 2

    @property
    def g(self) -> float:
        return math.sqrt(float(self.x_root)) / 2

    @property
    def lambda_(self) -> float:
        return self.N - self.g**2 + self.two_eps / 2

    @property
    def lambda_description(self) -> str:
        eps = Fraction(self.two_eps, 2)
        tail = "" if not eps else (f" + {eps}" if eps > 0 else f" - {-eps}")
        return f"lambda = {self.N} - g^2{tail}"

    def to_json(self) -> str:
        lo, hi = self.root_interval
        return json.dumps({
            "N": self.N,
            "two_eps": self.two_eps,
            "d": str(self.d_value),
            "x_lo": str(lo),
            "x_hi": str(hi),
            "g": self.g,
            "lambda": self.lambda_,
            "modules": list(self.rep_pair) if self.rep_pair else [],
        })


def rep_pair_labels(N: int, two_eps: int) -> tuple[str, str] | None:
    """Names of the two finite-dimensional modules meeting at a crossing.

    The pairing is uniform in N and 2*eps >= 0: the eigenvalue curve from the
    plain family at level N meets the tilde curve at level N + 2*eps, carried
    by F_{N+1} and F_{N+2*eps}. Labels are only defined for eps >= 0.
    """
    if two_eps < 0:
        return None
    return (f"F_{N + 1}", f"F_{N + two_eps}")


def find_crossings(N: int, two_eps: int, d_value, precision) -> list[CrossingRecord]:
    """Isolate all positive roots of the level-N plain constraint polynomial.

    Each root is a coupling value g = sqrt(x)/2 where lambda = N - g^2 + eps
    is a doubly degenerate eigenvalue (a level crossing).
    """
    d_value = to_fraction(d_value)
    if d_value <= 0:
        raise ValueError("d must be positive")
    fam = ConstraintFamily(N, two_eps, PLAIN)
    p = constraint_poly(fam, N).specialize(d_value)
    intervals = isolate_positive_roots(p, precision)
    pair = rep_pair_labels(N, two_eps)
    return [CrossingRecord(N=N, two_eps=two_eps, d_value=d_value,
                           root_interval=iv, rep_pair=pair)
            for iv in intervals]


# -- kernel vectors ------------------------------------------------------------

NONROOT_RESIDUAL = 1e-6  #: residual/norm ratio above which x is rejected as a non-root


def kernel_vector(fam: ConstraintFamily, d_value, x_value: float,
                  seed: str = "top") -> list[float]:
    """Unit kernel vector of the specialized full-size tridiagonal matrix.

    The matrix at a constraint-polynomial root has rank N, so its kernel is a
    line; the vector is reconstructed by the three-term recurrence seeded at
    the entry known to be nonzero ("top", descending from row 0) or from the
    other end ("bottom"). Raises ValueError when the residual shows x_value is
    not a root to working precision.
    """
    if seed not in ("top", "bottom"):
        raise ValueError("seed must be 'top' or 'bottom'")
    d = float(to_fraction(d_value))
    x = float(x_value)
    if x <= 0 or d <= 0:
        raise ValueError("x and d must be positive")
    spec = tridiag_matrix(fam, fam.N)
    m = spec.dense(Fraction(x), to_fraction(d_value))
    n = fam.N
    v = [0.0] * (n + 1)
    diag = m.diagonal()
    sup = [m[r, r + 1] for r in range(n)]
    sub = [m[r, r - 1] for r in range(1, n + 1)]
    if fam.variant == PLAIN:
        if seed == "top":
            v[0] = 1.0
            for r in range(n):
                prev = v[r - 1] if r >= 1 else 0.0
                lower = sub[r - 1] * prev if r >= 1 else 0.0
                v[r + 1] = -(diag[r] * v[r] + lower) / sup[r]
        else:
            v[n] = 1.0
            for r in range(n, 1, -1):
                upper = sup[r] * v[r + 1] if r < n else 0.0
                v[r - 1] = -(diag[r] * v[r] + upper) / sub[r - 1]
            # row 1 has a zero sub-diagonal entry; row 0 fixes v[0] instead
            v[0] = -sup[0] * v[1] / diag[0]
    else:
        if seed == "top":
            v[0] = 0.0  # forced by the first row: diag[0] = -d is nonzero
            v[1] = 1.0
            for r in range(1, n):
                v[r + 1] = -(diag[r] * v[r] + sub[r - 1] * v[r - 1]) / sup[r]
        else:
            v[n] = 1.0
            for r in range(n, 0, -1):
                upper = sup[r] * v[r + 1] if r < n else 0.0
                v[r - 1] = -(diag[r] * v[r] + upper) / sub[r - 1]
    vec = np.array(v)
    vec /= np.linalg.norm(vec)
    residual = np.linalg.norm(m @ vec) / np.linalg.norm(m)
    if residual > NONROOT_RESIDUAL:
        raise ValueError(
            f"x={x_value} is not a root of the specialized constraint "
            f"polynomial (residual ratio {residual:.3e})")
    if vec[0 if fam.variant == PLAIN else 1] < 0:
        vec = -vec
    return vec.tolist()


# -- exact identity and divisibility verifiers ---------------------------------

def verify_identity_half(N: int, fault_k: int | None = None) -> dict:
    """Check the exact ladder identity linking the two families at eps = 1/2.

    For every k in 0..N the tilde polynomial at level N+1 factors through the
    plain one at level N:
        tilde P_{k+1}  ==  [(k+1) x + d] P_k  -  k(k+1)(N-k) x P_{k-1}.
    Returns a report dict; fault_k (used by the CLI self-test) perturbs one
    coefficient of the right side so the failure path is observable.
    """
    if N < 0:
        raise ValueError("N must be >= 0")
    x, d = BivarPoly.x(), BivarPoly.d()
    plain = _poly_sequence(N, 1, N)
    tilde = _poly_sequence(N + 1, -1, N + 1)
    failures = []
    for k in range(N + 1):
        rhs = ((k + 1) * x + d) * plain[k]
        if k >= 1:
            rhs = rhs - (k * (k + 1) * (N - k)) * x * plain[k - 1]
        if fault_k is not None and k == fault_k:
            rhs = rhs + x
        if tilde[k + 1] != rhs:
            failures.append(k)
    return {"N": N, "checked": N + 1, "failures": failures,
            "ok": not failures}


def verify_conjecture(N: int, ell: int,
                      grid: Sequence[tuple] | None = None) -> dict:
    """Divide the tilde polynomial at level N+ell by the plain one at level N.

    At eps = ell/2 the quotient is conjectured to be a polynomial with integer
    coefficients, positive for all x > 0. The report states (a) whether the
    remainder vanishes exactly, (b) whether the quotient has integer
    coefficients, and (c) positivity at every grid sample with x > 0. A
    failing (a) is evidence against the conjecture and is reported, never
    raised.
    """
    if N < 1 or ell < 0:
        raise ValueError("need N >= 1 and ell >= 0")
    num = constraint_poly(ConstraintFamily(N + ell, ell, TILDE), N + ell)
    den = constraint_poly(ConstraintFamily(N, ell, PLAIN), N)
    quot, rem = poly_div_x(num, den)
    samples = [(to_fraction(xv), to_fraction(dv))
               for xv, dv in (grid if grid is not None else DEFAULT_GRID)]
    positivity = [((xv, dv), quot.evaluate(xv, dv) > 0)
                  for xv, dv in samples if xv > 0]
    all_positive = all(flag for _, flag in positivity)
    report = {
        "N": N,
        "ell": ell,
        "remainder_zero": rem.is_zero(),
        "integer_coeffs": quot.has_integer_coeffs(),
        "positivity": positivity,
        "all_positive": all_positive,
        "quotient": quot,
    }
    report["ok"] = (report["remainder_zero"] and report["integer_coeffs"]
                    and all_positive)
    return report


def refine_crossing(rec: CrossingRecord, precision) -> CrossingRecord:
    """Return the record with its root interval shrunk to width <= precision."""
    fam = ConstraintFamily(rec.N, rec.two_eps, PLAIN)
    p = constraint_poly(fam, rec.N).specialize(rec.d_value)
    interval = refine_isolated(p, rec.root_interval, precision)
    return CrossingRecord(N=rec.N, two_eps=rec.two_eps, d_value=rec.d_value,
                          root_interval=interval, rep_pair=rec.rep_pair)
