"""Cavity susceptibility, inverse Green function, and polariton roots.

The per-atom susceptibility is the half-line transform of the correlator's
imaginary part,

    chi(omega) = -8 * int_0^inf Im[S_x(t)] e^{i omega t} dt,

so the cavity self-energy is Sigma(omega) = g^2 chi(omega). The sampled
part of the correlator is integrated with a composite Boole rule; the
analytic tail is integrated in closed form, which also covers undamped
(purely oscillatory) correlators in the Abel-limit sense.

Sign convention for the inverse Green function: the 2x2 particle/hole
matrix is assembled as

    M(omega) = [[omega + i kappa - omega0 - Sigma,  -Sigma],
                [-Sigma, -omega - i kappa - omega0 - Sigma]]

whose determinant is omega0^2 + 2 omega0 Sigma - (omega + i kappa)^2. The
self-energy enters with the sign that makes the zero-frequency condition

    omega0^2 + kappa^2 + 2 omega0 Sigma(0) = 0

solvable for polarized ensembles (chi0 < 0), i.e. a ground-state-polarized
ensemble pulls the polariton root toward zero frequency.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .baths import CavityParams
from .errors import (
    ConvergenceError,
    InvalidModelError,
    NonIntegrableTailError,
    PreconditionError,
)
from .lindblad import CorrelationSeries, Tail

CHI0_IMAG_TOL = 1e-10


def _boole_weights(n: int) -> np.ndarray:
    # composite Boole rule: n samples, (n-1) % 4 == 0
    w = np.full(n, 14.0)
    w[0] = w[-1] = 7.0
    w[1::2] = 32.0
    w[2::4] = 12.0
    return w * (2.0 / 45.0)


def _integrate_samples(times: np.ndarray, values: np.ndarray) -> complex:
    n = times.size
    if n == 1:
        return 0.0 + 0.0j
    if (n - 1) % 4:
        raise PreconditionError(f"sample count {n} is not 4*k + 1")
    dt = times[1] - times[0]
    return complex(np.sum(_boole_weights(n) * values) * dt)


def _tail_transform(tail: Tail, omega: complex) -> complex:
    """int_{tail.start}^inf e^{i omega t} tail(t) dt, in closed form."""
    if tail.amp_cos == 0 and tail.amp_sin == 0:
        return 0.0 + 0.0j
    s = tail.decay_rate - 1j * omega
    for sign in (+1, -1):
        if abs(s - sign * 1j * tail.frequency) == 0.0:
            raise NonIntegrableTailError(
                f"undamped tail evaluated at its resonance omega = {omega}"
            )
    ep = cmath.exp((-s + 1j * tail.frequency) * tail.start) / (s - 1j * tail.frequency)
    em = cmath.exp((-s - 1j * tail.frequency) * tail.start) / (s + 1j * tail.frequency)
    i_cos = 0.5 * (ep + em)
    i_sin = (ep - em) / 2j
    return tail.amp_cos * i_cos + tail.amp_sin * i_sin


def chi_from_correlator(corr: CorrelationSeries, omega: float) -> complex:
    """chi(omega) from sampled correlator plus analytic tail.

    At omega = 0 the imaginary part must vanish; it is checked against
    CHI0_IMAG_TOL and discarded.
    """
    im_vals = np.imag(corr.values)
    body = _integrate_samples(corr.times, -8.0 * im_vals * np.exp(1j * omega * corr.times))
    im_tail = Tail(
        corr.tail.decay_rate,
        corr.tail.frequency,
        complex(corr.tail.amp_cos.imag),
        complex(corr.tail.amp_sin.imag),
        corr.tail.start,
    )
    value = body + (-8.0) * _tail_transform(im_tail, omega)
    if omega == 0.0:
        if abs(value.imag) > CHI0_IMAG_TOL:
            raise InvalidModelError(
                f"Im chi(0) = {value.imag} should vanish; correlator is inconsistent"
            )
        return complex(value.real)
    return value


@dataclass(frozen=True)
class Susceptibility:
    """Static chi0 plus an optional tabulated chi(omega) grid."""

    chi0: float
    omegas: np.ndarray | None = field(default=None, repr=False)
    values: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if (self.omegas is None) != (self.values is None):
            raise InvalidModelError("omegas and values must be given together")
        if self.omegas is not None:
            om = np.asarray(self.omegas, dtype=float)
            vals = np.asarray(self.values, dtype=complex)
            if om.shape != vals.shape or om.ndim != 1:
                raise InvalidModelError("omega grid and values must be matching 1-d arrays")
            object.__setattr__(self, "omegas", om)
            object.__setattr__(self, "values", vals)

    def at(self, omega: float) -> complex:
        if omega == 0.0:
            return complex(self.chi0)
        if self.omegas is None:
            raise PreconditionError("no chi(omega) grid available at omega != 0")
        idx = np.flatnonzero(np.abs(self.omegas - omega) <= 1e-12 * max(1.0, abs(omega)))
        if idx.size == 0:
            raise PreconditionError(f"omega = {omega} not on the tabulated grid")
        return complex(self.values[idx[0]])


def susceptibility_from_correlator(
    corr: CorrelationSeries, omegas: Sequence[float] | None = None
) -> Susceptibility:
    chi0 = chi_from_correlator(corr, 0.0).real
    if omegas is None:
        return Susceptibility(chi0=chi0)
    om = np.asarray(omegas, dtype=float)
    vals = np.array([chi_from_correlator(corr, w) for w in om], dtype=complex)
    return Susceptibility(chi0=chi0, omegas=om, values=vals)


def ensemble_chi(members: Sequence[tuple[float, Susceptibility]]) -> Susceptibility:
    """Weighted average susceptibility of an inhomogeneous ensemble."""
    if not members:
        raise PreconditionError("ensemble must have at least one member")
    weights = np.array([w for w, _ in members], dtype=float)
    if np.any(weights < 0):
        raise PreconditionError("ensemble weights must be nonnegative")
    if abs(weights.sum() - 1.0) > 1e-12:
        raise PreconditionError(f"ensemble weights sum to {weights.sum()}, not 1")
    chi0 = float(np.sum(weights * np.array([s.chi0 for _, s in members])))
    grids = [s.omegas for _, s in members]
    if all(g is None for g in grids):
        return Susceptibility(chi0=chi0)
    if any(g is None for g in grids):
        raise PreconditionError("either all or no ensemble members may carry a grid")
    ref = grids[0]
    for g in grids[1:]:
        if g.shape != ref.shape or np.max(np.abs(g - ref)) > 1e-12:
            raise PreconditionError("ensemble members have mismatched frequency grids")
    vals = np.zeros_like(members[0][1].values)
    for w, s in members:
        vals = vals + w * s.values
    return Susceptibility(chi0=chi0, omegas=ref.copy(), values=vals)


@dataclass(frozen=True)
class CavityGreenSample:
    omega: float
    matrix: np.ndarray = field(repr=False)
    det: complex


def _det_value(omega: complex, cavity: CavityParams, sigma: complex) -> complex:
    if omega == 0.0:
        # written so the zero-frequency reduction is exact, not rounded
        return cavity.omega0**2 + cavity.kappa**2 + 2.0 * cavity.omega0 * sigma
    return cavity.omega0**2 + 2.0 * cavity.omega0 * sigma - (omega + 1j * cavity.kappa) ** 2


def cavity_det(
    omega: float, cavity: CavityParams, g: float, chi: Susceptibility
) -> CavityGreenSample:
    """Inverse-Green-function sample at real omega."""
    sigma = g**2 * chi.at(omega)
    w0, kap = cavity.omega0, cavity.kappa
    matrix = np.array(
        [
            [omega + 1j * kap - w0 - sigma, -sigma],
            [-sigma, -omega - 1j * kap - w0 - sigma],
        ],
        dtype=complex,
    )
    return CavityGreenSample(omega=omega, matrix=matrix, det=_det_value(omega, cavity, sigma))


def polariton_roots(
    cavity: CavityParams,
    g: float,
    chi_of_omega: Callable[[complex], complex],
    seeds: Sequence[complex] | None = None,
    tol: float = 1e-10,
    max_iter: int = 200,
) -> list[complex]:
    """Complex roots of det(omega), damped Newton from the bare-cavity poles."""

    def f(w: complex) -> complex:
        return _det_value(w, cavity, g**2 * chi_of_omega(w))

    if seeds is None:
        seeds = [cavity.omega0 - 1j * cavity.kappa, -cavity.omega0 - 1j * cavity.kappa]
    scale = max(cavity.omega0, cavity.kappa, 1e-12)
    roots = []
    for seed in seeds:
        w = complex(seed)
        fw = f(w)
        converged = False
        for _ in range(max_iter):
            h = 1e-7 * scale
            dfd = (f(w + h) - f(w - h)) / (2.0 * h)
            if dfd == 0:
                raise ConvergenceError("vanishing derivative in polariton root search")
            step = fw / dfd
            # damping: halve until |f| decreases
            lam = 1.0
            for _ in range(60):
                w_new = w - lam * step
                f_new = f(w_new)
                if abs(f_new) <= abs(fw):
                    break
                lam *= 0.5
            else:
                raise ConvergenceError("damped Newton step failed to reduce |det|")
            done = abs(w_new - w) <= tol * max(1.0, abs(w_new))
            w, fw = w_new, f_new
            if done:
                converged = True
                break
        if not converged:
            raise ConvergenceError(f"polariton root search did not converge from seed {seed}")
        roots.append(w)
    return roots
