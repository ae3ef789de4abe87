"""Brute-force spectra of the shifted oscillator pair, used as the numerical
ground truth everything else is checked against.

In the sigma_x eigenbasis the Hamiltonian splits into two oscillator blocks
a^dag a +- (g (a + a^dag) + eps) coupled by Delta off the diagonal, so a
photon-number truncation at n_max gives a 2(n_max+1)-dimensional symmetric
matrix whose low eigenvalues converge rapidly in n_max.
"""
from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .constraint import CrossingRecord

DEFAULT_NMAX = 60
ESCALATED_NMAX = 120

#: an eigenvalue is converged when growing the truncation by this margin
#: moves it by less than CONV_TOL
CONV_MARGIN = 20
CONV_TOL = 1e-9

#: a level pair closer than this counts as a degeneracy ...
DEGENERACY_TOL = 1e-7
#: ... while avoided crossings in the validated regimes stay above this floor
AVOIDED_FLOOR = 1e-4


@dataclass(frozen=True)
class ModelParams:
    """Coupling g, tunneling Delta and asymmetry eps (oscillator frequency 1)."""

    g: float
    delta: float
    eps: float = 0.0

    def __post_init__(self):
        for name in ("g", "delta", "eps"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


def build_hamiltonian(params: ModelParams, n_max: int) -> np.ndarray:
    """Dense symmetric matrix in the truncated sigma_x-diagonal basis."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    dim = n_max + 1
    number = np.diag(np.arange(dim, dtype=float))
    ladder = np.zeros((dim, dim))
    for n in range(n_max):
        ladder[n, n + 1] = ladder[n + 1, n] = math.sqrt(n + 1.0)
    upper = number + params.g * ladder + params.eps * np.eye(dim)
    lower = number - params.g * ladder - params.eps * np.eye(dim)
    coupling = params.delta * np.eye(dim)
    return np.block([[upper, coupling], [coupling, lower]])


def eigenvalues(params: ModelParams, n_max: int) -> np.ndarray:
    """Ascending eigenvalues of the truncated Hamiltonian."""
    return np.linalg.eigvalsh(build_hamiltonian(params, n_max))


@dataclass(frozen=True)
class TruncatedSpectrum:
    params: ModelParams
    n_max: int
    eigenvalues: np.ndarray
    converged: np.ndarray  # bool per eigenvalue

    def __len__(self) -> int:
        return len(self.eigenvalues)


def truncated_spectrum(params: ModelParams,
                       n_max: int = DEFAULT_NMAX) -> TruncatedSpectrum:
    """Spectrum plus per-level convergence flags from an enlarged truncation."""
    ev = eigenvalues(params, n_max)
    ev_big = eigenvalues(params, n_max + CONV_MARGIN)
    flags = np.abs(ev - ev_big[: len(ev)]) < CONV_TOL
    return TruncatedSpectrum(params=params, n_max=n_max,
                             eigenvalues=ev, converged=flags)


@dataclass(frozen=True)
class CrossingObservation:
    """A numerically confirmed true degeneracy at coupling g_star."""

    g_star: float
    lambda_star: float
    gap: float
    indices: tuple[int, int]

    def to_json(self) -> str:
        return json.dumps({
            "g_star": self.g_star,
            "lambda_star": self.lambda_star,
            "gap": self.gap,
            "indices": list(self.indices),
        })


@dataclass(frozen=True)
class SpectralSweep:
    delta: float
    eps: float
    n_max: int
    g_grid: tuple[float, ...]
    table: np.ndarray  # shape (len(g_grid), 2*(n_max+1))
    converged: np.ndarray  # same shape, bool
    crossings: tuple[CrossingObservation, ...] = field(default_factory=tuple)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("g,index,eigenvalue,converged\n")
        for row, g in enumerate(self.g_grid):
            for idx in range(self.table.shape[1]):
                buf.write(f"{g!r},{idx},{float(self.table[row, idx])!r},"
                          f"{bool(self.converged[row, idx])}\n")
        return buf.getvalue()


def sweep(delta: float, eps: float, g_grid, n_max: int = DEFAULT_NMAX,
          detect_tol: float = DEGENERACY_TOL) -> SpectralSweep:
    """Tabulate the spectrum over a grid of couplings, noting degeneracies."""
    grid = tuple(float(g) for g in g_grid)
    if not grid:
        raise ValueError("g_grid must be nonempty")
    rows, flags, found = [], [], []
    for g in grid:
        ts = truncated_spectrum(ModelParams(g=g, delta=delta, eps=eps), n_max)
        rows.append(ts.eigenvalues)
        flags.append(ts.converged)
        gaps = np.diff(ts.eigenvalues)
        for i in np.nonzero(gaps < detect_tol)[0]:
            found.append(CrossingObservation(
                g_star=g,
                lambda_star=0.5 * (ts.eigenvalues[i] + ts.eigenvalues[i + 1]),
                gap=float(gaps[i]),
                indices=(int(i), int(i) + 1)))
    return SpectralSweep(delta=delta, eps=eps, n_max=n_max, g_grid=grid,
                         table=np.array(rows), converged=np.array(flags),
                         crossings=tuple(found))


def confirm_crossing(record: CrossingRecord, n_max: int = DEFAULT_NMAX,
                     tol: float = DEGENERACY_TOL) -> CrossingObservation:
    """Check a predicted exact crossing against direct diagonalization.

    The record pins lambda = N - g^2 + eps at g derived from the isolated
    root of the constraint polynomial; the truncated spectrum must contain
    two eigenvalues within tol of that target and of each other. Raises
    ValueError if it does not (wrong root, or truncation too small even
    after escalation).
    """
    g_star = record.g
    target = record.lambda_
    params = ModelParams(g=g_star, delta=math.sqrt(float(record.d_value)),
                         eps=record.two_eps / 2.0)
    ts = truncated_spectrum(params, n_max)
    order = np.argsort(np.abs(ts.eigenvalues - target))
    i, j = sorted((int(order[0]), int(order[1])))
    if not (ts.converged[i] and ts.converged[j]) and n_max < ESCALATED_NMAX:
        return confirm_crossing(record, n_max=ESCALATED_NMAX, tol=tol)
    err_i = abs(ts.eigenvalues[i] - target)
    err_j = abs(ts.eigenvalues[j] - target)
    gap = abs(ts.eigenvalues[j] - ts.eigenvalues[i])
    if err_i > tol or err_j > tol or gap > tol:
        if n_max < ESCALATED_NMAX:
            return confirm_crossing(record, n_max=ESCALATED_NMAX, tol=tol)
        raise ValueError(
            f"no degenerate pair at lambda={target}: nearest eigenvalues miss "
            f"by ({err_i:.3e}, {err_j:.3e}) with gap {gap:.3e} at n_max={n_max}")
    return CrossingObservation(
        g_star=g_star,
        lambda_star=0.5 * float(ts.eigenvalues[i] + ts.eigenvalues[j]),
        gap=float(gap), indices=(i, j))
