"""Sech-squared soliton ansatz and momentum bookkeeping.

The traveling wave u(x, t) = A sech^2(chi (x + V t)) with

    A = -2 k^(3/2),   chi = k^(1/3),   V = k^2 / 4

is parameterized by a single non-negative number k.  This module evaluates
the profile, provides quadrature oracles for the integrals entering the
momentum balance, and audits the closed-form momentum bookkeeping against
those quadratures.

A deliberate wrinkle: the closed-form normalized momentum used downstream,
P(k) = -(8/3) k, is *not* what direct integration of the ansatz gives
(int u^2 dx = (16/3) k^(8/3)).  The two normalizations coexist in the
literature this bookkeeping follows; rather than silently pick one,
``audit_momentum_derivation`` computes both sides and flags every entry
whose relative gap exceeds 1e-6.  Nothing in this module asserts the two
agree.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

__all__ = [
    "RealAmplitudeError",
    "UnsupportedOrderError",
    "SolitonParams",
    "soliton_profile",
    "sech_moment",
    "soliton_momentum_quadrature",
    "gradient_norm_quadrature",
    "cubic_flux_quadrature",
    "momentum_closed_form",
    "DiscrepancyEntry",
    "MomentumAudit",
    "audit_momentum_derivation",
]

#: relative gap above which an audit entry is flagged
DISCREPANCY_TOLERANCE = 1e-6

#: half-width (in the stretched variable) beyond which sech^2 tails are < 1e-34
_ETA_CUTOFF = 40.0


def _sech(a):
    # 2 e^{-|a|} / (1 + e^{-2|a|}) never overflows, unlike 1/cosh
    e = np.exp(-np.abs(a))
    return 2.0 * e / (1.0 + e * e)


class RealAmplitudeError(ValueError):
    """Raised when k < 0, where the amplitude -2 k^(3/2) is not real."""


class UnsupportedOrderError(ValueError):
    """Raised for sech-moment orders outside {2, 4, 6, 8}."""


@dataclass(frozen=True)
class SolitonParams:
    """Single-soliton parameterization by the momentum parameter k."""

    k: float

    def __post_init__(self):
        if not np.isfinite(self.k):
            raise ValueError(f"k must be finite, got {self.k!r}")

    @property
    def amplitude(self) -> float:
        """A = -2 k^(3/2); requires k >= 0."""
        if self.k < 0:
            raise RealAmplitudeError(f"amplitude is not real for k = {self.k} < 0")
        return -2.0 * self.k ** 1.5

    @property
    def width(self) -> float:
        """Inverse width chi = k^(1/3) (real cube root for any sign)."""
        return float(np.cbrt(self.k))

    @property
    def velocity(self) -> float:
        """Crest speed V = k^2 / 4 in the co-moving phase x + V t."""
        return 0.25 * self.k ** 2


def soliton_profile(params: SolitonParams, x, t: float = 0.0) -> np.ndarray:
    """Evaluate u(x, t) = A sech^2(chi (x + V t)); vectorized over x.

    Raises RealAmplitudeError for k < 0 and ValueError on non-finite x or t.
    """
    x = np.asarray(x, dtype=float)
    if not np.isfinite(t):
        raise ValueError(f"t must be finite, got {t!r}")
    if not np.all(np.isfinite(x)):
        raise ValueError("x contains non-finite entries")
    a = params.amplitude
    phase = params.width * (x + params.velocity * t)
    return a * _sech(phase) ** 2


def sech_moment(order: int) -> float:
    """Numeric int_{-inf}^{inf} sech^order(eta) d eta for order in {2, 4, 6, 8}.

    Computed by quadrature on a truncated symmetric domain; the tail beyond
    the cutoff is below 1e-34 and the quadrature tolerance is 1e-13, so the
    absolute error is well under 1e-12.  Known closed values (2, 4/3, 16/15,
    32/35) are reserved for the tests; this function is the oracle side.
    """
    if order not in (2, 4, 6, 8):
        raise UnsupportedOrderError(f"sech moment order must be one of 2, 4, 6, 8; got {order!r}")
    val, _err = integrate.quad(
        lambda e: _sech(e) ** order, -_ETA_CUTOFF, _ETA_CUTOFF, epsabs=1e-13, epsrel=1e-13, limit=200
    )
    return val


def _profile_domain(params: SolitonParams) -> float:
    # half-width in x such that chi * L >= cutoff/2, tails below ~1e-34 in u^2
    return 0.5 * _ETA_CUTOFF / params.width


def soliton_momentum_quadrature(params: SolitonParams, t: float = 0.0) -> float:
    """int u(x, t)^2 dx by direct quadrature over the truncated domain.

    Translation-invariant in t (the window follows the crest).  Returns 0
    exactly for k = 0.  Absolute tail error < 1e-12.
    """
    if params.k < 0:
        raise RealAmplitudeError(f"profile is not real for k = {params.k} < 0")
    if params.k == 0.0:
        return 0.0
    center = -params.velocity * t
    half = _profile_domain(params)
    val, _err = integrate.quad(
        lambda x: soliton_profile(params, x, t) ** 2,
        center - half,
        center + half,
        epsabs=1e-13,
        epsrel=1e-13,
        limit=200,
    )
    return val


def gradient_norm_quadrature(params: SolitonParams, t: float = 0.0) -> float:
    """int u_x^2 dx by quadrature (analytic derivative of the ansatz)."""
    if params.k < 0:
        raise RealAmplitudeError(f"profile is not real for k = {params.k} < 0")
    if params.k == 0.0:
        return 0.0
    a, chi, v = params.amplitude, params.width, params.velocity
    center = -v * t
    half = _profile_domain(params)

    def ux(x):
        ph = chi * (x + v * t)
        s = _sech(ph)
        return -2.0 * a * chi * s * s * np.tanh(ph)

    val, _err = integrate.quad(lambda x: ux(x) ** 2, center - half, center + half, epsabs=1e-13, epsrel=1e-13, limit=200)
    return val


def cubic_flux_quadrature(params: SolitonParams, t: float = 0.0) -> float:
    """int u_x^3 dx by quadrature; odd integrand, so ~0 for the symmetric pulse."""
    if params.k < 0:
        raise RealAmplitudeError(f"profile is not real for k = {params.k} < 0")
    if params.k == 0.0:
        return 0.0
    a, chi, v = params.amplitude, params.width, params.velocity
    center = -v * t
    half = _profile_domain(params)

    def ux(x):
        ph = chi * (x + v * t)
        s = _sech(ph)
        return -2.0 * a * chi * s * s * np.tanh(ph)

    val, _err = integrate.quad(lambda x: ux(x) ** 3, center - half, center + half, epsabs=1e-13, epsrel=1e-13, limit=200)
    return val


def momentum_closed_form(params: SolitonParams) -> float:
    """Normalized closed-form momentum P(k) = -(8/3) k, defined for any finite k."""
    return -(8.0 / 3.0) * params.k


@dataclass(frozen=True)
class DiscrepancyEntry:
    """One audited quantity: closed form vs quadrature and their relative gap."""

    name: str
    closed: float
    quadrature: float
    rel_error: float


@dataclass(frozen=True)
class MomentumAudit:
    """Side-by-side closed-form vs quadrature momentum bookkeeping.

    ``discrepancy_flags`` lists the entries whose relative gap exceeds
    DISCREPANCY_TOLERANCE; an empty list means the two routes agree on
    every entry.  All values are guaranteed finite.
    """

    closed_form_P: float
    quadrature_P: float
    alpha_term_closed: float
    alpha_term_quadrature: float
    beta_term_closed: float
    beta_term_quadrature: float
    entries: tuple[DiscrepancyEntry, ...] = field(default=())

    @property
    def discrepancy_flags(self) -> tuple[DiscrepancyEntry, ...]:
        return tuple(e for e in self.entries if e.rel_error > DISCREPANCY_TOLERANCE)


def _rel_gap(closed: float, quadrature: float) -> float:
    return abs(closed - quadrature) / max(abs(closed), 1e-30)


def audit_momentum_derivation(params: SolitonParams, alpha: float = 0.0, beta: float = 0.0) -> MomentumAudit:
    """Compare closed-form momentum bookkeeping against quadrature, term by term.

    The closed side uses P = -(8/3) k and the momentum-rate terms in that
    normalization: growth -(8/3) alpha k, damping +(32/15) beta k^2 (printed
    sign convention).  The quadrature side integrates the literal ansatz:
    growth -2 alpha int u^2 dx, damping -2 beta int u_x^2 dx.  Entries that
    disagree beyond 1e-6 relative are flagged, never asserted away; the
    relative gap is measured against the closed value.

    Parameters
    ----------
    params : SolitonParams
    alpha, beta : float
        Linear growth/damping coefficients of the perturbed flow.

    Returns
    -------
    MomentumAudit with every value finite.
    """
    if not np.isfinite(alpha) or not np.isfinite(beta):
        raise ValueError("alpha and beta must be finite")
    k = params.k
    closed_p = momentum_closed_form(params)
    quad_p = soliton_momentum_quadrature(params)
    grad2 = gradient_norm_quadrature(params)

    alpha_closed = -(8.0 / 3.0) * alpha * k
    alpha_quad = -2.0 * alpha * quad_p
    beta_closed = (32.0 / 15.0) * beta * k * k
    beta_quad = -2.0 * beta * grad2

    entries = (
        DiscrepancyEntry("momentum", closed_p, quad_p, _rel_gap(closed_p, quad_p)),
        DiscrepancyEntry("alpha_term", alpha_closed, alpha_quad, _rel_gap(alpha_closed, alpha_quad)),
        DiscrepancyEntry("beta_term", beta_closed, beta_quad, _rel_gap(beta_closed, beta_quad)),
    )
    audit = MomentumAudit(
        closed_form_P=closed_p,
        quadrature_P=quad_p,
        alpha_term_closed=alpha_closed,
        alpha_term_quadrature=alpha_quad,
        beta_term_closed=beta_closed,
        beta_term_quadrature=beta_quad,
        entries=entries,
    )
    for e in entries:
        if not (np.isfinite(e.closed) and np.isfinite(e.quadrature)):
            raise ArithmeticError(f"audit entry {e.name!r} is not finite")
    return audit
