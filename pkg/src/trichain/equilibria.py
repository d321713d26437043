"""Fixed points of the food-chain map, their eigenvalues, stability
classes, critical parameter surfaces, and the zone classifier.

The map has four biologically meaningful fixed points:

    P1 = (0, 0, 0)                          total extinction
    P2 = ((mu-1)/mu, 0, 0)                  prey only
    P3 = (1/beta, 1 - 1/mu - 1/beta, 0)     prey + predator
    P4 = (rho, 1/gamma, rho - 1/beta)       coexistence,
                                            rho = (1 + 1/beta - 1/gamma - 1/mu)/2

A fifth algebraic fixed point has a negative coordinate for all positive
parameters and is deliberately unrepresentable here.

Existence in the working domain is nested: P2 needs mu >= 1, P3 needs
mu >= beta/(beta-1), P4 needs mu >= beta*gamma/((beta-1)*gamma - beta).
At each equality the newer point collides with the previous one
(transcritical bifurcation).

Eigenvalues of P1..P3 have closed forms; P4's come from a numeric solve
of the characteristic cubic, which is branch-stable where the published
radical expressions are not.  The solver is validated in the test suite
against an eigenvector identity at the P3/P4 collision surface and
against ``numpy.linalg.eigvals``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import NamedTuple

from .map_core import Params, State, jacobian

__all__ = [
    "FixedPointId",
    "StabilityClass",
    "ZoneId",
    "FixedPointReport",
    "CriticalMu",
    "NoCrossingError",
    "fixed_point_coordinates",
    "fixed_point_exists",
    "fixed_points",
    "eigenvalues_closed",
    "eigenvalues_numeric",
    "classify",
    "classify_eigenvalues",
    "critical_mu_values",
    "psi4",
    "psi4_crossings",
    "in_NM4",
    "in_H4",
    "zone",
    "mu_transcritical_p2p3",
    "mu_spiral_onset_p3",
    "mu_transcritical_p3p4",
    "mu_unit_modulus_p3",
]


class FixedPointId(Enum):
    P1 = "P1"
    P2 = "P2"
    P3 = "P3"
    P4 = "P4"


class StabilityClass(Enum):
    SINK_NODE = "sink_node"
    SPIRAL_NODE_SINK = "spiral_node_sink"
    SADDLE_U1 = "saddle_u1"
    SADDLE_U2 = "saddle_u2"
    SPIRAL_SINK_NODE_SOURCE = "spiral_sink_node_source"
    SPIRAL_NODE_SOURCE = "spiral_node_source"
    SPIRAL_SOURCE_NODE_SINK = "spiral_source_node_sink"
    SPIRAL_NODE_SINK_OF_P4 = "spiral_node_sink_of_p4"
    NON_HYPERBOLIC = "non_hyperbolic"


class ZoneId(Enum):
    A = "A"
    B = "B"
    C = "C"
    D = "D"
    E = "E"
    F = "F"
    G = "G"
    H = "H"
    I = "I"
    J = "J"
    BOUNDARY = "Boundary"
    UNCLASSIFIED = "Unclassified"


@dataclass(frozen=True)
class FixedPointReport:
    id: FixedPointId
    coordinates: State
    exists_in_E: bool
    eigenvalues: tuple
    stability: StabilityClass | None


class CriticalMu(NamedTuple):
    label: str
    mu: float


class NoCrossingError(RuntimeError):
    """The scanned eigenvalue modulus never reaches the unit circle."""


# ---------------------------------------------------------------------------
# critical surfaces (as functions of beta, gamma)

def mu_transcritical_p2p3(beta: float) -> float:
    """mu at which P3 collides with P2: beta/(beta-1)."""
    return beta / (beta - 1.0)


def mu_spiral_onset_p3(beta: float) -> float:
    """mu above which P3's planar eigenvalue pair turns complex."""
    return 2.0 * beta * (beta - 1.0 - math.sqrt(beta * (beta - 2.0)))


def mu_transcritical_p3p4(beta: float, gamma: float) -> float:
    """mu at which P4 collides with P3 (coexistence onset)."""
    return beta * gamma / ((beta - 1.0) * gamma - beta)


def mu_unit_modulus_p3(beta: float) -> float:
    """mu at which P3's complex pair reaches the unit circle: beta/(beta-2)."""
    return beta / (beta - 2.0)


# ---------------------------------------------------------------------------
# fixed points

def fixed_point_coordinates(fp_id: FixedPointId, p: Params) -> State:
    """Coordinates from the closed formulas (defined for all positive
    parameters, whether or not the point lies in the working domain)."""
    mu, beta, gamma = p.mu, p.beta, p.gamma
    if fp_id is FixedPointId.P1:
        return State(0.0, 0.0, 0.0)
    if fp_id is FixedPointId.P2:
        return State((mu - 1.0) / mu, 0.0, 0.0)
    if fp_id is FixedPointId.P3:
        return State(1.0 / beta, 1.0 - 1.0 / mu - 1.0 / beta, 0.0)
    rho = 0.5 * (1.0 + 1.0 / beta - 1.0 / gamma - 1.0 / mu)
    return State(rho, 1.0 / gamma, rho - 1.0 / beta)


def fixed_point_exists(fp_id: FixedPointId, p: Params) -> bool:
    """Existence in the working domain (closed inequalities, so collision
    parameters count as existing)."""
    if fp_id is FixedPointId.P1:
        return True
    if fp_id is FixedPointId.P2:
        return p.mu >= 1.0
    if fp_id is FixedPointId.P3:
        return p.mu >= mu_transcritical_p2p3(p.beta)
    return p.mu >= mu_transcritical_p3p4(p.beta, p.gamma)


def fixed_points(p: Params, tol: float = 1e-9) -> list[FixedPointReport]:
    """Reports for P1..P4: coordinates, domain membership, eigenvalues
    (modulus-sorted) and stability class.

    Coordinates and eigenvalues are evaluated from the formulas even for
    points currently outside the working domain; ``exists_in_E`` tells the
    two apart and ``stability`` is ``None`` for such points (the class
    vocabulary describes existing equilibria only).
    """
    out = []
    for fp_id in FixedPointId:
        coords = fixed_point_coordinates(fp_id, p)
        eigs = eigenvalues_numeric(fp_id, p)
        exists = fixed_point_exists(fp_id, p)
        out.append(
            FixedPointReport(
                id=fp_id,
                coordinates=coords,
                exists_in_E=exists,
                eigenvalues=eigs,
                stability=classify_eigenvalues(eigs, fp_id, tol) if exists else None,
            )
        )
    return out


# ---------------------------------------------------------------------------
# eigenvalues

def eigenvalues_closed(fp_id: FixedPointId, p: Params) -> tuple:
    """Closed-form eigenvalues of P1, P2 or P3 in their conventional
    label order (not modulus-sorted).  P4 has no usable closed form here;
    use :func:`eigenvalues_numeric`.
    """
    mu, beta, gamma = p.mu, p.beta, p.gamma
    if fp_id is FixedPointId.P1:
        return (complex(mu), 0j, 0j)
    if fp_id is FixedPointId.P2:
        return (complex(2.0 - mu), complex(beta * (1.0 - 1.0 / mu)), 0j)
    if fp_id is FixedPointId.P3:
        lead = complex(gamma * (1.0 - 1.0 / beta - 1.0 / mu))
        disc = (beta + 0.5 * mu) ** 2 - beta * beta * mu
        base = 1.0 - mu / (2.0 * beta)
        if disc >= 0.0:
            r = math.sqrt(disc) / beta
            return (lead, complex(base + r), complex(base - r))
        r = math.sqrt(-disc) / beta
        return (lead, complex(base, r), complex(base, -r))
    raise ValueError("no closed form is used for P4; call eigenvalues_numeric")


def _quadratic_roots(b: float, c: float) -> tuple:
    # Monic x^2 + b x + c = 0, numerically stable real branch.
    disc = b * b - 4.0 * c
    if disc >= 0.0:
        if c == 0.0:
            return (0j, complex(-b))
        sq = math.sqrt(disc)
        r1 = (-b - sq) / 2.0 if b >= 0.0 else (-b + sq) / 2.0
        return (complex(r1), complex(c / r1))
    im = math.sqrt(-disc) / 2.0
    return (complex(-b / 2.0, im), complex(-b / 2.0, -im))


def _cubic_roots(a: float, b: float, c: float) -> tuple:
    """Roots of the monic cubic x^3 + a x^2 + b x + c with real
    coefficients, via Cardano in complex arithmetic plus a Newton polish.

    A zero constant term (exact, as produced by the rank-deficient
    Jacobians at P1 and P2) is factored out so the double root at the
    origin stays exact.
    """
    if c == 0.0:
        return (0j,) + _quadratic_roots(a, b)

    d0 = a * a - 3.0 * b
    d1 = 2.0 * a**3 - 9.0 * a * b + 27.0 * c
    s = cmath.sqrt(complex(d1 * d1 - 4.0 * d0**3))
    u1 = (d1 + s) / 2.0
    u2 = (d1 - s) / 2.0
    u = u1 if abs(u1) >= abs(u2) else u2
    if u == 0:
        r = complex(-a / 3.0)
        return (r, r, r)
    C = u ** (1.0 / 3.0)
    w = complex(-0.5, 0.5 * math.sqrt(3.0))
    roots = []
    for _ in range(3):
        roots.append(-(a + C + d0 / C) / 3.0)
        C *= w

    # Up to two Newton steps per root sharpen Cardano's last couple of
    # digits; a step is kept only if it actually reduces the residual
    # (near-multiple roots can make the derivative vanish).
    polished = []
    for r in roots:
        for _ in range(2):
            f = ((r + a) * r + b) * r + c
            if f == 0:
                break
            df = (3.0 * r + 2.0 * a) * r + b
            if df == 0:
                break
            r2 = r - f / df
            f2 = ((r2 + a) * r2 + b) * r2 + c
            if not abs(f2) < abs(f):
                break
            r = r2
        polished.append(r)

    cleaned = []
    for r in polished:
        if abs(r.imag) <= 1e-12 * max(1.0, abs(r.real)):
            r = complex(r.real)
        cleaned.append(r)

    # Real coefficients force non-real roots into conjugate pairs; enforce
    # the symmetry exactly so pair members share modulus and real part.
    nonreal = [r for r in cleaned if r.imag != 0.0]
    if len(nonreal) == 3:
        nonreal.sort(key=lambda r: abs(r.imag))
        cleaned = [complex(nonreal[0].real)] + nonreal[1:]
        nonreal = cleaned[1:]
    if len(nonreal) == 2:
        w = 0.5 * (nonreal[0] + nonreal[1].conjugate())
        if w.imag < 0.0:
            w = w.conjugate()
        cleaned = [r for r in cleaned if r.imag == 0.0] + [w, w.conjugate()]
    return tuple(cleaned)


def _sorted_eigs(roots) -> tuple:
    # Deterministic report order: modulus desc, then real part desc, then
    # imaginary part desc (fixes the order within a conjugate pair).
    return tuple(sorted(roots, key=lambda l: (-abs(l), -l.real, -l.imag)))


def eigenvalues_numeric(fp_id: FixedPointId, p: Params) -> tuple:
    """Eigenvalues of the Jacobian at the fixed point, from the
    characteristic cubic, sorted by descending modulus (ties by descending
    real part)."""
    m = jacobian(fixed_point_coordinates(fp_id, p), p)
    a, b, c, d, e, f, g, h, i = m
    tr = a + e + i
    minors = (e * i - f * h) + (a * i - c * g) + (a * e - b * d)
    det = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    return _sorted_eigs(_cubic_roots(-tr, minors, -det))


_IMAG_EPS = 1e-9


def classify_eigenvalues(
    eigs, fp_id: FixedPointId, tol: float = 1e-9
) -> StabilityClass:
    """Map an eigenvalue triple to the stability vocabulary.

    Non-hyperbolic wins whenever any modulus is within ``tol`` of 1.
    Otherwise the class is determined by how many moduli exceed 1 and
    whether a complex pair is present.  The all-real fully repelling
    pattern does not occur for these fixed points inside the parameter
    cuboid and is rejected.
    """
    mods = [abs(l) for l in eigs]
    if any(abs(m - 1.0) <= tol for m in mods):
        return StabilityClass.NON_HYPERBOLIC

    complex_eigs = [l for l in eigs if abs(l.imag) > _IMAG_EPS]
    if len(complex_eigs) >= 2:
        pair_out = max(abs(l) for l in complex_eigs) > 1.0
        real_eigs = [l for l in eigs if abs(l.imag) <= _IMAG_EPS]
        real_out = bool(real_eigs) and max(abs(l) for l in real_eigs) > 1.0
        if not pair_out and not real_out:
            if fp_id is FixedPointId.P4:
                return StabilityClass.SPIRAL_NODE_SINK_OF_P4
            return StabilityClass.SPIRAL_NODE_SINK
        if not pair_out and real_out:
            return StabilityClass.SPIRAL_SINK_NODE_SOURCE
        if pair_out and not real_out:
            return StabilityClass.SPIRAL_SOURCE_NODE_SINK
        return StabilityClass.SPIRAL_NODE_SOURCE

    n_out = sum(1 for m in mods if m > 1.0)
    if n_out == 0:
        return StabilityClass.SINK_NODE
    if n_out == 1:
        return StabilityClass.SADDLE_U1
    if n_out == 2:
        return StabilityClass.SADDLE_U2
    raise ValueError("all-real repelling triple is outside the class vocabulary")


def classify(fp_id: FixedPointId, p: Params, tol: float = 1e-9) -> StabilityClass:
    """Stability class of a fixed point from its numeric eigenvalues."""
    return classify_eigenvalues(eigenvalues_numeric(fp_id, p), fp_id, tol)


# ---------------------------------------------------------------------------
# the coexistence point's complex pair and the psi4 surface

def _p4_pair_modulus(mu: float, beta: float, gamma: float) -> float:
    """Modulus of the complex eigenvalue pair of the coexistence point.

    Falls back to the second largest modulus in the (degenerate) case of a
    fully real spectrum, which does not happen while the point sits in the
    positive octant.
    """
    rho = 0.5 * (1.0 + 1.0 / beta - 1.0 / gamma - 1.0 / mu)
    m = (
        1.0 - mu * rho, -mu * rho, -mu * rho,
        beta / gamma, 1.0, -beta / gamma,
        0.0, gamma * (rho - 1.0 / beta), 1.0,
    )
    a, b, c, d, e, f, g, h, i = m
    tr = a + e + i
    minors = (e * i - f * h) + (a * i - c * g) + (a * e - b * d)
    det = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    roots = _cubic_roots(-tr, minors, -det)
    pair = [r for r in roots if abs(r.imag) > _IMAG_EPS]
    if pair:
        return max(abs(r) for r in pair)
    return sorted(abs(r) for r in roots)[1]


_PSI4_SCAN = 400


def psi4_crossings(beta: float, gamma: float, tol: float = 1e-10) -> tuple:
    """All mu in (mu_onset, 4] where the coexistence point's complex pair
    crosses the unit circle, ascending, refined by bisection to ``tol``.

    The scan is dense enough to honor the non-monotone modulus profile
    seen in one corner of the base rectangle, so a dip back below the unit
    circle would show up as extra crossings.
    """
    mu0 = mu_transcritical_p3p4(beta, gamma)
    lo, hi = mu0, 4.0
    if lo >= hi:
        return ()
    mus = [lo + (hi - lo) * k / _PSI4_SCAN for k in range(_PSI4_SCAN + 1)]
    gs = [_p4_pair_modulus(m, beta, gamma) - 1.0 for m in mus]

    crossings = []
    for k in range(_PSI4_SCAN):
        g0, g1 = gs[k], gs[k + 1]
        if g0 == 0.0:
            if k == 0:
                crossings.append(mus[0])
            continue
        if (g0 < 0.0) == (g1 < 0.0) and g1 != 0.0:
            continue
        a, fa = mus[k], g0
        b = mus[k + 1]
        while b - a > tol:
            mid = 0.5 * (a + b)
            fm = _p4_pair_modulus(mid, beta, gamma) - 1.0
            if fm == 0.0:
                a = b = mid
                break
            if (fm < 0.0) == (fa < 0.0):
                a, fa = mid, fm
            else:
                b = mid
        crossings.append(0.5 * (a + b))
    return tuple(crossings)


@lru_cache(maxsize=16384)
def psi4(beta: float, gamma: float, tol: float = 1e-10) -> float:
    """Largest mu in (mu_onset, 4] at which the coexistence point's
    complex pair has unit modulus.

    At the single corner of the base rectangle where the pair already sits
    on the unit circle at the onset value, that onset value is returned.
    Raises :class:`NoCrossingError` if the pair modulus stays below 1 on
    the whole interval.
    """
    crossings = psi4_crossings(beta, gamma, tol)
    if crossings:
        return crossings[-1]
    mu0 = mu_transcritical_p3p4(beta, gamma)
    g0 = _p4_pair_modulus(mu0, beta, gamma) - 1.0
    if abs(g0) <= 1e-9 or (g0 > 0.0 and mu0 >= 4.0):
        return mu0
    raise NoCrossingError(
        f"complex-pair modulus of the coexistence point never reaches 1 for "
        f"beta={beta}, gamma={gamma}"
    )


_NM4_SCAN = 1500


def in_NM4(beta: float, gamma: float) -> bool:
    """True iff the coexistence pair's modulus is a non-monotone function
    of mu on (mu_onset, 4], detected by a fine scan.

    Computed from the definition; the published fitted quadratic for the
    region boundary is only used as a cross-check in tests.
    """
    mu0 = mu_transcritical_p3p4(beta, gamma)
    if mu0 >= 4.0:
        return False
    prev = _p4_pair_modulus(mu0, beta, gamma)
    for k in range(1, _NM4_SCAN + 1):
        mu = mu0 + (4.0 - mu0) * k / _NM4_SCAN
        cur = _p4_pair_modulus(mu, beta, gamma)
        if cur < prev - 1e-9:
            return True
        prev = cur
    return False


def in_H4(beta: float, gamma: float) -> bool:
    """True iff psi4(beta, gamma) >= 3, from the definition."""
    return psi4(beta, gamma) >= 3.0


def critical_mu_values(beta: float, gamma: float) -> list[CriticalMu]:
    """The labeled mu levels that organize the fixed-point structure at
    this (beta, gamma), sorted ascending."""
    values = [
        CriticalMu("p2_exists", 1.0),
        CriticalMu("p3_exists", mu_transcritical_p2p3(beta)),
        CriticalMu("p3_spiral_onset", mu_spiral_onset_p3(beta)),
        CriticalMu("p4_exists", mu_transcritical_p3p4(beta, gamma)),
        CriticalMu("p2_flip", 3.0),
        CriticalMu("p3_unit_modulus", mu_unit_modulus_p3(beta)),
        CriticalMu("p4_unit_modulus", psi4(beta, gamma)),
    ]
    return sorted(values, key=lambda cm: cm.mu)


# ---------------------------------------------------------------------------
# zone classifier

def zone(p: Params, tol: float = 1e-9) -> ZoneId:
    """Classify (mu, beta, gamma) into the stability zones A..J.

    Returns ``BOUNDARY`` when mu lies within ``tol`` of any defining
    surface, and ``UNCLASSIFIED`` outside the cuboid or in the few slivers
    the zone definitions leave open (for example the beta = 2.5 edge above
    mu = 3 outside the region where the coexistence point stays stable).
    """
    if not p.in_cuboid():
        return ZoneId.UNCLASSIFIED
    mu, beta, gamma = p.mu, p.beta, p.gamma

    t2 = mu_transcritical_p2p3(beta)
    t3 = mu_spiral_onset_p3(beta)
    t4 = mu_transcritical_p3p4(beta, gamma)
    bb2 = mu_unit_modulus_p3(beta)
    psi = psi4(beta, gamma)

    for surface in (1.0, t2, t3, t4, psi, 3.0, bb2, 4.0):
        if abs(mu - surface) <= tol:
            return ZoneId.BOUNDARY

    h4 = psi >= 3.0
    if mu < 1.0:
        return ZoneId.A
    if mu < t2:
        return ZoneId.B
    if mu < t3:
        return ZoneId.C
    if mu < t4:
        return ZoneId.D
    if mu < min(3.0, psi):
        return ZoneId.E
    if not h4 and psi < mu < min(3.0, bb2):
        return ZoneId.F
    if beta > 3.0 and bb2 < mu < 3.0:
        return ZoneId.G
    if h4 and 3.0 < mu < psi:
        return ZoneId.H
    if 2.5 < beta < 3.0 and max(3.0, psi) < mu < min(4.0, bb2):
        return ZoneId.I
    if beta > 8.0 / 3.0 and max(3.0, bb2) < mu < 4.0:
        return ZoneId.J
    return ZoneId.UNCLASSIFIED
