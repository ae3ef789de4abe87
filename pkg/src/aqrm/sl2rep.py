"""Windowed exact matrices for the sl2 principal-series actions.

The infinite weight modules V_{j,a} (j = 1 spherical, j = 2 non-spherical)
are truncated to a finite index window; every operator tracks how many
generator factors built it, because a product of q generators is only exact on
columns at distance >= q from the window edge. All identities downstream are
asserted on those interior columns, where truncation is invisible and the
arithmetic is exact.

The module also hosts the second-order element K(alpha, beta, gamma; C) =
[H/2 - E + alpha](F + beta) + gamma[H - 1/2] + C whose eigenvalue problem,
for the two parameter substitutions in reduction_kparams, is the sl2 face of
the spectral problem: its finite-block restrictions are the constraint
tridiagonal matrices and its conjugated image is a confluent Heun operator.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactpoly import to_fraction

GENERATORS = ("H", "E", "F")


@dataclass(frozen=True)
class RepParams:
    """Principal-series label (j, a) plus the truncation window on weights."""

    j: int
    a: Fraction
    n_min: int
    n_max: int

    def __post_init__(self):
        if self.j not in (1, 2):
            raise ValueError("j must be 1 or 2")
        if self.n_min > self.n_max:
            raise ValueError("empty window")
        object.__setattr__(self, "a", to_fraction(self.a))

    @property
    def width(self) -> int:
        return self.n_max - self.n_min + 1


@dataclass(frozen=True)
class RepOperator:
    """Dense exact matrix over the window basis, with truncation bookkeeping.

    depth = number of generator factors in the deepest product that formed
    this operator; columns with basis index in
    [n_min + depth, n_max - depth] are exact.
    """

    params: RepParams
    depth: int
    matrix: tuple[tuple[Fraction, ...], ...]

    def _require_same_window(self, other: "RepOperator"):
        if (self.params.n_min, self.params.n_max) != (other.params.n_min,
                                                      other.params.n_max):
            raise ValueError("operators live on different windows")

    def __add__(self, other: "RepOperator") -> "RepOperator":
        self._require_same_window(other)
        m = tuple(tuple(a + b for a, b in zip(ra, rb))
                  for ra, rb in zip(self.matrix, other.matrix))
        return RepOperator(self.params, max(self.depth, other.depth), m)

    def __sub__(self, other: "RepOperator") -> "RepOperator":
        return self + other.scale(-1)

    def __matmul__(self, other: "RepOperator") -> "RepOperator":
        self._require_same_window(other)
        n = self.params.width
        rows = []
        for i in range(n):
            row = [Fraction(0)] * n
            for k in range(n):
                c = self.matrix[i][k]
                if c:
                    other_row = other.matrix[k]
                    for j in range(n):
                        if other_row[j]:
                            row[j] += c * other_row[j]
            rows.append(tuple(row))
        return RepOperator(self.params, self.depth + other.depth, tuple(rows))

    def scale(self, c) -> "RepOperator":
        c = to_fraction(c)
        return RepOperator(self.params, self.depth,
                           tuple(tuple(c * v for v in row)
                                 for row in self.matrix))

    def entry(self, n_row: int, n_col: int) -> Fraction:
        """Matrix entry addressed by weight indices rather than offsets."""
        return self.matrix[n_row - self.params.n_min][n_col - self.params.n_min]

    def interior_range(self, depth: int | None = None) -> tuple[int, int]:
        q = self.depth if depth is None else depth
        return (self.params.n_min + q, self.params.n_max - q)

    def interior_width(self, depth: int | None = None) -> int:
        lo, hi = self.interior_range(depth)
        return hi - lo + 1

    def column(self, n: int) -> list[Fraction]:
        c = n - self.params.n_min
        return [row[c] for row in self.matrix]

    def to_json_dict(self) -> dict:
        return {
            "j": self.params.j,
            "a": str(self.params.a),
            "n_min": self.params.n_min,
            "n_max": self.params.n_max,
            "depth": self.depth,
            "matrix": [[str(v) for v in row] for row in self.matrix],
        }


def identity_op(params: RepParams, c=1) -> RepOperator:
    c = to_fraction(c)
    n = params.width
    m = tuple(tuple(c if i == k else Fraction(0) for k in range(n))
              for i in range(n))
    return RepOperator(params, 0, m)


def _action_coeff(j: int, a: Fraction, gen: str, n: int) -> tuple[int, Fraction]:
    """(index shift, coefficient) of a generator acting on the weight vector n."""
    if gen == "H":
        return 0, Fraction(2 * n) if j == 1 else Fraction(2 * n + 1)
    if gen == "E":
        return 1, n + a / 2 if j == 1 else n + (a + 1) / 2
    if gen == "F":
        return -1, -n + a / 2 if j == 1 else -n + (a - 1) / 2
    raise ValueError(f"unknown generator {gen!r}")


def rep_generator(params: RepParams, gen: str) -> RepOperator:
    """Exact windowed matrix of one generator; images past the edge truncate."""
    n = params.width
    rows = [[Fraction(0)] * n for _ in range(n)]
    for col in range(n):
        shift, coeff = _action_coeff(params.j, params.a, gen,
                                     params.n_min + col)
        target = col + shift
        if 0 <= target < n:
            rows[target][col] = coeff
    return RepOperator(params, 1, tuple(tuple(r) for r in rows))


def max_interior_discrepancy(lhs: RepOperator, rhs: RepOperator,
                             depth: int | None = None) -> dict:
    """Compare two operators on the interior their depths guarantee exact."""
    lhs._require_same_window(rhs)
    q = max(lhs.depth, rhs.depth) if depth is None else depth
    lo, hi = lhs.interior_range(q)
    if lo > hi:
        raise ValueError("window too small: empty interior at this depth")
    mismatches = 0
    worst = Fraction(0)
    for n_col in range(lo, hi + 1):
        for n_row in range(lo, hi + 1):
            delta = lhs.entry(n_row, n_col) - rhs.entry(n_row, n_col)
            if delta:
                mismatches += 1
                if abs(delta) > abs(worst):
                    worst = delta
    return {"interior": (lo, hi), "mismatches": mismatches,
            "max_discrepancy": worst, "ok": mismatches == 0}


# -- the second-order element K ------------------------------------------------

@dataclass(frozen=True)
class KParams:
    """Parameters (alpha, beta, gamma; C) of the element K."""

    alpha: Fraction
    beta: Fraction
    gamma: Fraction
    C: Fraction

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "C"):
            object.__setattr__(self, name, to_fraction(getattr(self, name)))

    def lambda_a(self, a) -> Fraction:
        """The scalar beta(a/2 + alpha) + gamma(a - 1/2) split off by K."""
        a = to_fraction(a)
        return self.beta * (a / 2 + self.alpha) + self.gamma * (a - Fraction(1, 2))


def assemble_K(params: RepParams, kp: KParams) -> RepOperator:
    """Matrix of [H/2 - E + alpha](F + beta) + gamma[H - 1/2] + C."""
    probe = identity_op(params)
    if probe.interior_width(2) < 3:
        raise ValueError("window too small: interior width below 3 at depth 2")
    H = rep_generator(params, "H")
    E = rep_generator(params, "E")
    F = rep_generator(params, "F")
    left = H.scale(Fraction(1, 2)) - E + identity_op(params, kp.alpha)
    right = F + identity_op(params, kp.beta)
    tail = H.scale(kp.gamma) + identity_op(params, kp.C - kp.gamma / 2)
    return left @ right + tail


def mu_value(lambda_, g2, d) -> Fraction:
    """The accessory constant (lambda+g^2)^2 - 4g^2(lambda+g^2) - d."""
    lam, g2, d = to_fraction(lambda_), to_fraction(g2), to_fraction(d)
    s = lam + g2
    return s * s - 4 * g2 * s - d


def reduction_kparams(which: int, lambda_, g2, d, eps) -> tuple[KParams, Fraction]:
    """K-parameters and weight label a for the two eigenproblem reductions.

    which = 1 carries the component analytic at z = -g; which = 2 the one
    analytic at z = +g (equivalently, eps negated together with a unit shift
    of the weight label).
    """
    lam, g2 = to_fraction(lambda_), to_fraction(g2)
    d, eps = to_fraction(d), to_fraction(eps)
    s = lam + g2
    mu = mu_value(lam, g2, d)
    if which == 1:
        kp = KParams(alpha=1 - (s - eps) / 2,
                     beta=4 * g2,
                     gamma=Fraction(1, 2) - (s + eps) / 2,
                     C=mu + 4 * eps * g2 - eps * eps)
        a = -(s - eps)
    elif which == 2:
        kp = KParams(alpha=-Fraction(1, 2) - (s + eps) / 2,
                     beta=4 * g2,
                     gamma=-(s - eps) / 2,
                     C=mu - 4 * eps * g2 - eps * eps)
        a = -(s - 1 + eps)
    else:
        raise ValueError("which must be 1 or 2")
    return kp, a


# -- verification reports -------------------------------------------------------

def commutation_relations_check(params: RepParams) -> dict:
    """[H,E] = 2E, [H,F] = -2F, [E,F] = H on the depth-2 interior."""
    H = rep_generator(params, "H")
    E = rep_generator(params, "E")
    F = rep_generator(params, "F")
    checks = {
        "HE": max_interior_discrepancy(H @ E - E @ H, E.scale(2), depth=2),
        "HF": max_interior_discrepancy(H @ F - F @ H, F.scale(-2), depth=2),
        "EF": max_interior_discrepancy(E @ F - F @ E, H, depth=2),
    }
    return {"checks": checks, "ok": all(c["ok"] for c in checks.values())}


def casimir(params: RepParams) -> RepOperator:
    """Omega = H^2 + 2EF + 2FE on the window (depth 2)."""
    H = rep_generator(params, "H")
    E = rep_generator(params, "E")
    F = rep_generator(params, "F")
    return H @ H + (E @ F).scale(2) + (F @ E).scale(2)


def casimir_scalar_check(params: RepParams) -> dict:
    """Omega acts by the scalar a(a-2) on the depth-2 interior."""
    scalar = params.a * (params.a - 2)
    report = max_interior_discrepancy(casimir(params),
                                      identity_op(params, scalar))
    report["scalar"] = scalar
    return report


def commutator_check(params: RepParams, lambda_, g2, d, eps) -> dict:
    """Exact identity for [K, Ktilde] built from the two reductions.

    [K, Kt] = (eps+3/2)(H+F)(F+4g^2) + (eps-1/2)(8g^2 E + HF)
              - 2(eps+1/2)(lambda+g^2-1/2) F
    holds on the depth-4 interior for any (j, a) window, with K and Ktilde
    assembled at the same (lambda, g^2, d, eps).
    """
    lam, g2 = to_fraction(lambda_), to_fraction(g2)
    d, eps = to_fraction(d), to_fraction(eps)
    probe = identity_op(params)
    if probe.interior_width(4) < 5:
        raise ValueError("window too small: need interior width >= 5 at depth 4")
    kp1, _ = reduction_kparams(1, lam, g2, d, eps)
    kp2, _ = reduction_kparams(2, lam, g2, d, eps)
    K = assemble_K(params, kp1)
    Kt = assemble_K(params, kp2)
    lhs = K @ Kt - Kt @ K
    H = rep_generator(params, "H")
    E = rep_generator(params, "E")
    F = rep_generator(params, "F")
    t1 = ((H + F) @ (F + identity_op(params, 4 * g2))).scale(eps + Fraction(3, 2))
    t2 = (E.scale(8 * g2) + H @ F).scale(eps - Fraction(1, 2))
    t3 = F.scale(2 * (eps + Fraction(1, 2)) * (lam + g2 - Fraction(1, 2)))
    rhs = t1 + t2 - t3
    report = max_interior_discrepancy(lhs, rhs, depth=4)
    report["params"] = {"lambda": str(lam), "g2": str(g2), "d": str(d),
                        "eps": str(eps), "j": params.j, "a": str(params.a)}
    return report


def _closure_ok(params: RepParams, block: range) -> bool:
    """True when the span of the block indices is stable under H, E and F."""
    for gen in GENERATORS:
        op = rep_generator(params, gen)
        for n in block:
            for n_row in range(params.n_min + 1, params.n_max):
                if n_row not in block and op.entry(n_row, n):
                    return False
    return True


def invariant_subspace_check(j: int, m: int) -> dict:
    """Finite-block closure and boundary annihilation for the reducible labels."""
    if m < 1:
        raise ValueError("m must be >= 1")
    lo, hi = -m - 3, m + 3
    report: dict = {"j": j, "m": m}
    if j == 1:
        inner = RepParams(1, Fraction(2 - 2 * m), lo, hi)
        report["finite_block_closed"] = _closure_ok(inner, range(-m + 1, m))
        odd = RepParams(1, Fraction(-2 * m), lo, hi)
        report["odd_block_closed"] = _closure_ok(odd, range(-m, m + 1))
        bnd = RepParams(1, Fraction(2 * m), lo, hi)
        report["lowest_weight_killed"] = not any(
            rep_generator(bnd, "F").column(m))
        report["highest_weight_killed"] = not any(
            rep_generator(bnd, "E").column(-m))
    else:
        inner = RepParams(2, Fraction(1 - 2 * m), lo, hi)
        report["finite_block_closed"] = _closure_ok(inner, range(-m, m))
        bnd = RepParams(2, Fraction(2 * m + 1), lo, hi)
        report["lowest_weight_killed"] = not any(
            rep_generator(bnd, "F").column(m))
        report["highest_weight_killed"] = not any(
            rep_generator(bnd, "E").column(-m - 1))
    report["ok"] = all(v for k, v in report.items() if isinstance(v, bool))
    return report


def intertwiner_check(a, window: tuple[int, int]) -> dict:
    """Diagonal equivalence between the spherical actions at a and 2 - a.

    A = diag(c_n) with c_n = prod_{k=1..|n|} (k - a/2)/(k - 1 + a/2) satisfies
    A pi_a(X) = pi_{2-a}(X) A for every generator, exactly, on the depth-1
    interior. Requires a not an even integer so no factor degenerates.
    """
    a = to_fraction(a)
    if a.denominator == 1 and a.numerator % 2 == 0:
        raise ValueError("a must not be an even integer")
    n_min, n_max = window
    pa = RepParams(1, a, n_min, n_max)
    pb = RepParams(1, 2 - a, n_min, n_max)

    def c(n: int) -> Fraction:
        val = Fraction(1)
        for k in range(1, abs(n) + 1):
            val *= (k - a / 2) / (k - 1 + a / 2)
        return val

    diag = tuple(tuple(c(n_min + i) if i == k else Fraction(0)
                       for k in range(pa.width)) for i in range(pa.width))
    A = RepOperator(pa, 0, diag)
    checks = {}
    for gen in GENERATORS:
        lhs = A @ rep_generator(pa, gen)
        rhs_matrix = (RepOperator(pa, 1, rep_generator(pb, gen).matrix)) @ A
        checks[gen] = max_interior_discrepancy(lhs, rhs_matrix, depth=1)
    return {"a": a, "checks": checks,
            "ok": all(c["ok"] for c in checks.values())}


# -- bridges to the constraint families -----------------------------------------

def eigenproblem_window(N: int, two_eps: int, variant: str, g2, d,
                        margin: int = 3) -> dict:
    """Representation data behind one constraint family at level N.

    Returns the window parameters, the K-parameters of the matching reduction,
    the scalar Lambda_a, and the weight indices in matrix row order (row r of
    the constraint tridiagonal corresponds to the r-th listed weight vector).
    """
    if margin < 2:
        raise ValueError("margin must be >= 2 so the block stays interior")
    g2, d = to_fraction(g2), to_fraction(d)
    eps = Fraction(two_eps, 2)
    if variant == "plain":
        lam = N - g2 + eps
        which = 1
        if N % 2 == 0:
            m = N // 2
            j, rows = 1, [m - r for r in range(N + 1)]
        else:
            m = (N + 1) // 2
            j, rows = 2, [m - 1 - r for r in range(N + 1)]
    elif variant == "tilde":
        lam = N - g2 - eps
        which = 2
        if N % 2 == 0:
            m = N // 2
            j, rows = 2, [m - r for r in range(N + 1)]
        else:
            m = (N - 1) // 2
            j, rows = 1, [m + 1 - r for r in range(N + 1)]
    else:
        raise ValueError(f"unknown variant {variant!r}")
    kp, a = reduction_kparams(which, lam, g2, d, eps)
    params = RepParams(j, a, min(rows) - margin, max(rows) + margin)
    return {"params": params, "kparams": kp, "a": a, "lambda": lam,
            "rows": rows, "Lambda_a": kp.lambda_a(a)}


def k_block_minus_lambda(N: int, two_eps: int, variant: str, g2, d) -> list[list[Fraction]]:
    """The (N+1)x(N+1) block of pi(K) - Lambda_a in constraint row order."""
    data = eigenproblem_window(N, two_eps, variant, g2, d)
    op = assemble_K(data["params"], data["kparams"]) - identity_op(
        data["params"], data["Lambda_a"])
    rows = data["rows"]
    return [[op.entry(rn, cn) for cn in rows] for rn in rows]
