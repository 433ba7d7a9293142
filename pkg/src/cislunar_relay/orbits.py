"""Orbit models: circular/elliptical lunar orbits, EML1/EML2 halo orbits,
resonant semi-major-axis enumeration, and geostationary relays.

Lunar satellite positions are produced in the LCE frame (see
:mod:`cislunar_relay.frames`); GEO positions in ECI. The halo members come
from the third-order analytic approximation of periodic libration-point
orbits in the circular restricted three-body problem, re-phased so one
revolution takes exactly HALO_PERIOD_MIN.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .constants import (
    EARTH_MOON_DIST_KM,
    EARTH_MOON_MU,
    GEO_ALTITUDE_KM,
    GM_MOON_M3S2,
    HALO_AMPLITUDE_KM,
    HALO_PERIOD_MIN,
)
from .errors import ValidationError
from .frames import (
    Epoch,
    GeodeticSite,
    ecef_from_geodetic,
    eci_from_ecef,
    rot_x,
    rot_z,
    solve_kepler,
)

# Semi-major axes (km) of the default genome catalog: lunar orbits whose
# ordinary periods divide a whole number of halo periods (the four largest),
# plus two low-altitude entries carried for comparison sweeps.
DEFAULT_AXIS_CATALOG_KM = (2650.0, 3210.0, 3525.0, 5596.0, 8882.0, 14100.0)


@dataclass(frozen=True)
class KeplerElements:
    """Keplerian elements of a moon-centered orbit; angles in degrees.

    nu0_deg is the true anomaly at t = 0. The orbit plane is fixed in LCE.
    """

    a_km: float
    e: float = 0.0
    i_deg: float = 0.0
    raan_deg: float = 0.0
    argp_deg: float = 0.0
    nu0_deg: float = 0.0


@dataclass(frozen=True)
class HaloSpec:
    """A halo orbit about EML1 or EML2.

    family is "north" or "south" (mirror images in z); phase advances
    linearly so one revolution takes exactly period_min.
    """

    libration_point: int
    family: str
    z_amplitude_km: float = HALO_AMPLITUDE_KM
    period_min: float = HALO_PERIOD_MIN
    phase0_deg: float = 0.0

    def __post_init__(self):
        if self.libration_point not in (1, 2):
            raise ValidationError(
                f"libration_point must be 1 or 2, got {self.libration_point}")
        if self.family not in ("north", "south"):
            raise ValidationError(f"family must be north or south, got {self.family!r}")


@dataclass(frozen=True)
class GeoSpec:
    """A geostationary relay pinned above longitude_deg east."""

    longitude_deg: float


@dataclass(frozen=True)
class AdmissibleAxis:
    """One resonant semi-major axis: k revolutions per y halo periods."""

    k: int
    y: int
    period_min: float
    a_km: float


def ordinary_period(a_km: float) -> float:
    """Two-body orbital period about the moon, in minutes."""
    a_m = a_km * 1000.0
    return 2.0 * math.pi * math.sqrt(a_m**3 / GM_MOON_M3S2) / 60.0


def semi_major_axis_for_period(period_min: float) -> float:
    """Semi-major axis (km) whose two-body lunar period is period_min."""
    t_s = period_min * 60.0
    return (GM_MOON_M3S2 * t_s**2 / (4.0 * math.pi**2)) ** (1.0 / 3.0) / 1000.0


def admissible_semi_major_axes(t_halo_min: float = HALO_PERIOD_MIN,
                               y_max: int = 2,
                               k_max: int = 400,
                               a_min_km: float = 1837.0,
                               a_max_km: float = 15000.0) -> list[AdmissibleAxis]:
    """Enumerate semi-major axes commensurate with the halo period.

    Keeps every a = cbrt(GM (y*t_halo/k)^2 / 4 pi^2) with integer k in
    [1, k_max] and y in [1, y_max] that lands in [a_min_km, a_max_km], sorted
    ascending and deduplicated within 1 km (smallest y representative wins).
    """
    found: list[AdmissibleAxis] = []
    for y in range(1, y_max + 1):
        for k in range(1, k_max + 1):
            period = y * t_halo_min / k
            a = semi_major_axis_for_period(period)
            if a_min_km <= a <= a_max_km:
                found.append(AdmissibleAxis(k=k, y=y, period_min=period, a_km=a))
    found.sort(key=lambda e: (e.a_km, e.y, e.k))
    kept: list[AdmissibleAxis] = []
    for entry in found:
        if not kept or entry.a_km - kept[-1].a_km > 1.0:
            kept.append(entry)
    return kept


def _perifocal_to_lce(raan_deg: float, i_deg: float, argp_deg: float) -> np.ndarray:
    # Standard perifocal -> reference rotation: active z(raan) x(i) z(argp),
    # which in the frame-rotation matrices used here is the negated-angle
    # composition.
    return rot_z(-raan_deg) @ rot_x(-i_deg) @ rot_z(-argp_deg)


def _true_to_mean_anomaly(nu_rad: float, e: float) -> float:
    e_anom = 2.0 * math.atan2(
        math.sqrt(1.0 - e) * math.sin(nu_rad / 2.0),
        math.sqrt(1.0 + e) * math.cos(nu_rad / 2.0),
    )
    return e_anom - e * math.sin(e_anom)


def kepler_position_lce(elements: KeplerElements, t_min):
    """LCE position (km) of a moon orbiter at time t_min minutes past epoch.

    Accepts a scalar t (returns shape (3,)) or an array (returns (n, 3)).
    """
    if elements.a_km <= 0:
        raise ValidationError(f"semi-major axis must be positive, got {elements.a_km}")
    if not 0.0 <= elements.e < 1.0:
        raise ValidationError(f"eccentricity must be in [0, 1), got {elements.e}")
    t = np.asarray(t_min, dtype=float)
    n_rad_min = 2.0 * math.pi / ordinary_period(elements.a_km)
    m0 = _true_to_mean_anomaly(math.radians(elements.nu0_deg), elements.e)
    m = m0 + n_rad_min * t
    e_anom = np.asarray(solve_kepler(m, elements.e), dtype=float)
    x = elements.a_km * (np.cos(e_anom) - elements.e)
    y = elements.a_km * math.sqrt(1.0 - elements.e**2) * np.sin(e_anom)
    perifocal = np.stack([x, y, np.zeros_like(x)], axis=-1)
    rot = _perifocal_to_lce(elements.raan_deg, elements.i_deg, elements.argp_deg)
    return perifocal @ rot.T


# --- third-order halo approximation ---------------------------------------


@dataclass(frozen=True)
class _HaloCoefficients:
    gamma: float
    lam: float
    k: float
    delta_n_south: float
    l1: float
    l2: float
    big_delta: float
    a21: float
    a22: float
    a23: float
    a24: float
    a31: float
    a32: float
    b21: float
    b22: float
    b31: float
    b32: float
    d21: float
    d31: float
    d32: float


def _gamma_l(point: int, mu: float) -> float:
    # Distance from the libration point to the moon in Earth-moon units:
    # positive real root of the collinear-point quintic inside (0, 1).
    if point == 1:
        coeffs = [1.0, -(3.0 - mu), 3.0 - 2.0 * mu, -mu, 2.0 * mu, -mu]
    else:
        coeffs = [1.0, 3.0 - mu, 3.0 - 2.0 * mu, -mu, -2.0 * mu, -mu]
    roots = np.roots(coeffs)
    real = roots[np.abs(roots.imag) < 1e-12].real
    candidates = real[(real > 0.0) & (real < 1.0)]
    return float(candidates[0])


@lru_cache(maxsize=None)
def _halo_coefficients(point: int, mu: float = EARTH_MOON_MU) -> _HaloCoefficients:
    g = _gamma_l(point, mu)

    def cn(n: int) -> float:
        if point == 1:
            return (mu + (-1.0) ** n * (1.0 - mu) * g ** (n + 1) / (1.0 - g) ** (n + 1)) / g**3
        return ((-1.0) ** n * mu + (-1.0) ** n * (1.0 - mu) * g ** (n + 1) / (1.0 + g) ** (n + 1)) / g**3

    c2, c3, c4 = cn(2), cn(3), cn(4)
    lam = math.sqrt((-(c2 - 2.0) + math.sqrt((c2 - 2.0) ** 2 + 4.0 * (c2 - 1.0) * (1.0 + 2.0 * c2))) / 2.0)
    k = (lam**2 + 1.0 + 2.0 * c2) / (2.0 * lam)

    d1 = 3.0 * lam**2 / k * (k * (6.0 * lam**2 - 1.0) - 2.0 * lam)
    d2 = 8.0 * lam**2 / k * (k * (11.0 * lam**2 - 1.0) - 2.0 * lam)
    a21 = 3.0 * c3 * (k**2 - 2.0) / (4.0 * (1.0 + 2.0 * c2))
    a22 = 3.0 * c3 / (4.0 * (1.0 + 2.0 * c2))
    a23 = -3.0 * c3 * lam / (4.0 * k * d1) * (3.0 * k**3 * lam - 6.0 * k * (k - lam) + 4.0)
    a24 = -3.0 * c3 * lam / (4.0 * k * d1) * (2.0 + 3.0 * k * lam)
    b21 = -3.0 * c3 * lam / (2.0 * d1) * (3.0 * k * lam - 4.0)
    b22 = 3.0 * c3 * lam / d1
    d21 = -c3 / (2.0 * lam**2)
    a31 = (-9.0 * lam / (4.0 * d2) * (4.0 * c3 * (k * a23 - b21) + k * c4 * (4.0 + k**2))
           + (9.0 * lam**2 + 1.0 - c2) / (2.0 * d2)
           * (3.0 * c3 * (2.0 * a23 - k * b21) + c4 * (2.0 + 3.0 * k**2)))
    a32 = (-1.0 / d2 * (9.0 * lam / 4.0 * (4.0 * c3 * (k * a24 - b22) + k * c4)
           + 1.5 * (9.0 * lam**2 + 1.0 - c2) * (c3 * (k * b22 + d21 - 2.0 * a24) - c4)))
    b31 = (3.0 / (8.0 * d2) * (8.0 * lam * (3.0 * c3 * (k * b21 - 2.0 * a23) - c4 * (2.0 + 3.0 * k**2))
           + (9.0 * lam**2 + 1.0 + 2.0 * c2) * (4.0 * c3 * (k * a23 - b21) + k * c4 * (4.0 + k**2))))
    b32 = (1.0 / d2 * (9.0 * lam * (c3 * (k * b22 + d21 - 2.0 * a24) - c4)
           + 0.375 * (9.0 * lam**2 + 1.0 + 2.0 * c2) * (4.0 * c3 * (k * a24 - b22) + k * c4)))
    d31 = 3.0 / (64.0 * lam**2) * (4.0 * c3 * a24 + c4)
    d32 = 3.0 / (64.0 * lam**2) * (4.0 * c3 * (a23 - d21) + c4 * (4.0 + k**2))

    denom = 2.0 * lam * (lam * (1.0 + k**2) - 2.0 * k)
    s1 = (1.5 * c3 * (2.0 * a21 * (k**2 - 2.0) - a23 * (k**2 + 2.0) - 2.0 * k * b21)
          - 0.375 * c4 * (3.0 * k**4 - 8.0 * k**2 + 8.0)) / denom
    s2 = (1.5 * c3 * (2.0 * a22 * (k**2 - 2.0) + a24 * (k**2 + 2.0) + 2.0 * k * b22 + 5.0 * d21)
          + 0.375 * c4 * (12.0 - k**2)) / denom
    a1 = -1.5 * c3 * (2.0 * a21 + a23 + 5.0 * d21) - 0.375 * c4 * (12.0 - k**2)
    a2 = 1.5 * c3 * (a24 - 2.0 * a22) + 1.125 * c4
    l1 = a1 + 2.0 * lam**2 * s1
    l2 = a2 + 2.0 * lam**2 * s2

    # "South" is the family whose mean z offset (-3 delta_n d21 Ax Az) is
    # negative; the sign of d21 flips between L1 and L2 because c3 does.
    delta_n_south = 1.0 if d21 > 0 else -1.0
    return _HaloCoefficients(
        gamma=g, lam=lam, k=k, delta_n_south=delta_n_south,
        l1=l1, l2=l2, big_delta=lam**2 - c2,
        a21=a21, a22=a22, a23=a23, a24=a24, a31=a31, a32=a32,
        b21=b21, b22=b22, b31=b31, b32=b32, d21=d21, d31=d31, d32=d32,
    )


def _halo_series(co: _HaloCoefficients, ax: float, az: float, tau):
    """Normalized halo coordinates (relative to the libration point) for the
    southern member; x, y are family-independent."""
    c1, s1 = np.cos(tau), np.sin(tau)
    c2t, s2t = np.cos(2.0 * tau), np.sin(2.0 * tau)
    c3t, s3t = np.cos(3.0 * tau), np.sin(3.0 * tau)
    x = (co.a21 * ax**2 + co.a22 * az**2 - ax * c1
         + (co.a23 * ax**2 - co.a24 * az**2) * c2t
         + (co.a31 * ax**3 - co.a32 * ax * az**2) * c3t)
    y = (co.k * ax * s1
         + (co.b21 * ax**2 - co.b22 * az**2) * s2t
         + (co.b31 * ax**3 - co.b32 * ax * az**2) * s3t)
    z = co.delta_n_south * (az * c1 + co.d21 * ax * az * (c2t - 3.0)
                            + (co.d32 * az * ax**2 - co.d31 * az**3) * c3t)
    return x, y, z


def _halo_inplane_amplitude(co: _HaloCoefficients, az: float) -> float:
    ax_sq = (-co.big_delta - co.l2 * az**2) / co.l1
    if ax_sq <= 0.0:
        raise ValidationError(
            "halo z-amplitude is outside the range admitting a periodic member")
    return math.sqrt(ax_sq)


@lru_cache(maxsize=None)
def _halo_amplitudes(point: int, z_amplitude_km: float, mu: float = EARTH_MOON_MU):
    """Solve for the (ax, az) series amplitudes whose peak |z| equals the
    requested physical amplitude.

    The raw series with az set directly overshoots peak |z| by up to ~16%
    at these amplitudes, so az is back-solved by fixed point.
    """
    co = _halo_coefficients(point, mu)
    unit_km = co.gamma * EARTH_MOON_DIST_KM
    target = z_amplitude_km / unit_km
    tau = np.linspace(0.0, 2.0 * math.pi, 2049)
    az = target
    for _ in range(60):
        ax = _halo_inplane_amplitude(co, az)
        _, _, z = _halo_series(co, ax, az, tau)
        peak = float(np.max(np.abs(z)))
        scale = target / peak
        az *= scale
        if abs(scale - 1.0) < 1e-13:
            break
    return ax, az


def halo_position_lce(spec: HaloSpec, t_min):
    """LCE position (km) of a halo member at t_min minutes past epoch.

    The libration point offset puts EML1 on the Earth side of the moon
    (negative x) and EML2 beyond it. Scalar t gives shape (3,), arrays give
    (n, 3).
    """
    co = _halo_coefficients(spec.libration_point)
    ax, az = _halo_amplitudes(spec.libration_point, spec.z_amplitude_km)
    t = np.asarray(t_min, dtype=float)
    phase = (t / spec.period_min + spec.phase0_deg / 360.0) % 1.0
    tau = 2.0 * math.pi * phase
    x, y, z = _halo_series(co, ax, az, tau)
    if spec.family == "north":
        z = -z
    unit_km = co.gamma * EARTH_MOON_DIST_KM
    pos = np.stack([x, y, z], axis=-1) * unit_km
    sign = -1.0 if spec.libration_point == 1 else 1.0
    pos[..., 0] += sign * co.gamma * EARTH_MOON_DIST_KM
    return pos


def geo_position_eci(spec: GeoSpec, epoch: Epoch):
    """ECI position (km) of a geostationary relay at `epoch`."""
    site = GeodeticSite("geo", 0.0, spec.longitude_deg, GEO_ALTITUDE_KM)
    return eci_from_ecef(ecef_from_geodetic(site), epoch)
