"""Time scales and coordinate frames for the Earth-Moon system.

Three frames are used throughout:

* ECEF: Earth-centered Earth-fixed, spherical Earth of radius R_EARTH_KM.
* ECI: Earth-centered inertial, equatorial; ECEF and ECI coincide when the
  Greenwich Mean Sidereal Time angle is zero.
* LCE: Moon-centered "lunar cislunar" frame whose x axis points along the
  Earth->Moon direction, y along the moon's orbital motion, z completing the
  right-handed triad. Lunar surface points and lunar satellite orbits are
  expressed here.

Rotation matrices follow the frame-rotation convention
``rot_z(a) = [[cos a, sin a, 0], [-sin a, cos a, 0], [0, 0, 1]]`` acting on
column vectors, so ``rot_z(-gmst)`` carries ECEF into ECI with the Earth
rotating eastward.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import R_EARTH_KM, OBLIQUITY_DEG
from .errors import ConvergenceError

Vec3 = np.ndarray

_J2000_JD = 2451545.0

# GMST in hours at J2000 and its advance per solar day
_GMST0_HOURS = 18.697374558
_GMST_RATE_HOURS_PER_DAY = 24.06570982441908


def rot_z(angle_deg):
    """Frame rotation about z by `angle_deg`.

    Accepts a scalar (returns a (3, 3) matrix) or an array of angles
    (returns (..., 3, 3)).
    """
    a = np.deg2rad(np.asarray(angle_deg, dtype=float))
    c, s = np.cos(a), np.sin(a)
    z, o = np.zeros_like(c), np.ones_like(c)
    return np.stack(
        [
            np.stack([c, s, z], axis=-1),
            np.stack([-s, c, z], axis=-1),
            np.stack([z, z, o], axis=-1),
        ],
        axis=-2,
    )


def rot_x(angle_deg):
    """Frame rotation about x by `angle_deg`; same shape rules as rot_z."""
    a = np.deg2rad(np.asarray(angle_deg, dtype=float))
    c, s = np.cos(a), np.sin(a)
    z, o = np.zeros_like(c), np.ones_like(c)
    return np.stack(
        [
            np.stack([o, z, z], axis=-1),
            np.stack([z, c, s], axis=-1),
            np.stack([z, -s, c], axis=-1),
        ],
        axis=-2,
    )


def _trunc_div(a: int, b: int) -> int:
    # Integer division truncating toward zero (the calendar algorithm below
    # was stated with Fortran semantics, which differ from // for negatives).
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b >= 0) else -q


def _jdn_to_ymd(jdn: int):
    # Inverse calendar conversion; every intermediate here is positive for
    # any modern date, so // carries the intended truncation.
    l = jdn + 68569
    n = 4 * l // 146097
    l = l - (146097 * n + 3) // 4
    i = 4000 * (l + 1) // 1461001
    l = l - 1461 * i // 4 + 31
    j = 80 * l // 2447
    day = l - 2447 * j // 80
    l = j // 11
    month = j + 2 - 12 * l
    year = 100 * (n - 49) + i + l
    return year, month, day


@dataclass(frozen=True)
class Epoch:
    """An instant in time, stored as days since J2000 (2000-01-01 12:00)."""

    days_since_j2000: float

    @classmethod
    def from_calendar(cls, year: int, month: int, day: int,
                      hour: int = 0, minute: int = 0, second: float = 0.0) -> "Epoch":
        """Build an epoch from a Gregorian calendar date and time of day."""
        jdn = (
            day
            - 32075
            + _trunc_div(1461 * (year + 4800 + _trunc_div(month - 14, 12)), 4)
            + _trunc_div(367 * (month - 2 - _trunc_div(month - 14, 12) * 12), 12)
            - _trunc_div(3 * _trunc_div(year + 4900 + _trunc_div(month - 14, 12), 100), 4)
        )
        day_frac = (hour + minute / 60.0 + second / 3600.0) / 24.0
        jd = jdn - 0.5 + day_frac
        return cls(jd - _J2000_JD)

    def to_calendar(self):
        """Inverse of from_calendar.

        Returns (year, month, day, hour, minute, second); round trips to well
        under a millisecond.
        """
        jd = self.days_since_j2000 + _J2000_JD
        jdn = math.floor(jd + 0.5)
        frac = jd + 0.5 - jdn
        # Round to the nearest microsecond before splitting so that
        # 23:59:59.999... does not leak into the wrong day.
        usec = round(frac * 86400.0 * 1e6)
        if usec >= 86400 * 10**6:
            usec -= 86400 * 10**6
            jdn += 1
        year, month, day = _jdn_to_ymd(jdn)
        sec_total, rem = divmod(usec, 10**6)
        hour, sec_total = divmod(sec_total, 3600)
        minute, second = divmod(sec_total, 60)
        return year, month, day, int(hour), int(minute), second + rem / 1e6

    def add_minutes(self, minutes: float) -> "Epoch":
        return Epoch(self.days_since_j2000 + minutes / 1440.0)


def gmst_hours(epoch: Epoch) -> float:
    """Greenwich Mean Sidereal Time in hours, in [0, 24)."""
    return (_GMST0_HOURS + _GMST_RATE_HOURS_PER_DAY * epoch.days_since_j2000) % 24.0


@dataclass(frozen=True)
class GeodeticSite:
    """A ground site on the spherical Earth."""

    name: str
    lat_deg: float
    lon_deg: float
    height_km: float = 0.0


def ecef_from_geodetic(site: GeodeticSite) -> Vec3:
    """ECEF position of a site on the spherical Earth (km)."""
    r = R_EARTH_KM + site.height_km
    lat = math.radians(site.lat_deg)
    lon = math.radians(site.lon_deg)
    return np.array(
        [r * math.cos(lat) * math.cos(lon),
         r * math.cos(lat) * math.sin(lon),
         r * math.sin(lat)]
    )


def eci_from_ecef(v_ecef: Vec3, epoch: Epoch) -> Vec3:
    """Rotate an ECEF vector into ECI at the given epoch."""
    return rot_z(-15.0 * gmst_hours(epoch)) @ np.asarray(v_ecef, dtype=float)


def ecef_from_eci(v_eci: Vec3, epoch: Epoch) -> Vec3:
    """Rotate an ECI vector into ECEF at the given epoch."""
    return rot_z(15.0 * gmst_hours(epoch)) @ np.asarray(v_eci, dtype=float)


@dataclass(frozen=True)
class LunarElements:
    """Mean Keplerian elements of the moon's geocentric orbit.

    Angles are degrees; the node, argument of perigee and mean anomaly
    propagate linearly in days since J2000.
    """

    a_km: float = 384400.0
    e: float = 0.0549
    i_deg: float = 5.145
    raan0_deg: float = 125.045
    raan_rate_deg_day: float = -0.05295
    argp0_deg: float = 318.15
    argp_rate_deg_day: float = 0.1643
    m0_deg: float = 115.365
    m_rate_deg_day: float = 13.0649

    def raan_at(self, days):
        return self.raan0_deg + self.raan_rate_deg_day * np.asarray(days, dtype=float)

    def argp_at(self, days):
        return self.argp0_deg + self.argp_rate_deg_day * np.asarray(days, dtype=float)

    def mean_anomaly_at(self, days):
        return self.m0_deg + self.m_rate_deg_day * np.asarray(days, dtype=float)


DEFAULT_LUNAR_ELEMENTS = LunarElements()


def solve_kepler(mean_anomaly_rad, e: float, tol: float = 1e-12, max_iter: int = 50):
    """Solve Kepler's equation E - e sin E = M for the eccentric anomaly.

    Accepts a scalar or array mean anomaly (radians). The returned E lies on
    the same 2-pi branch as M (|E - M| <= e). Raises ConvergenceError if the
    residual cannot be driven below `tol`.
    """
    if not 0.0 <= e < 1.0:
        raise ValueError(f"eccentricity must be in [0, 1), got {e}")
    m = np.asarray(mean_anomaly_rad, dtype=float)
    ecc = np.full_like(m, e)
    e_anom = m + 0.85 * ecc * np.sign(np.sin(m))
    for _ in range(max_iter):
        f = e_anom - ecc * np.sin(e_anom) - m
        if np.all(np.abs(f) <= tol):
            break
        e_anom = e_anom - f / (1.0 - ecc * np.cos(e_anom))
    resid = np.abs(e_anom - ecc * np.sin(e_anom) - m)
    if not np.all(resid <= tol):
        # Newton is safely convergent for e < 1 from the start above; bisect
        # as a deterministic fallback for any straggler anyway.
        bad = resid > tol
        lo = m - e - tol
        hi = m + e + tol
        e_bad = e_anom
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            fm = mid - ecc * np.sin(mid) - m
            take_lo = fm > 0
            hi = np.where(take_lo, mid, hi)
            lo = np.where(take_lo, lo, mid)
            e_bad = mid
        e_anom = np.where(bad, e_bad, e_anom)
        resid = np.abs(e_anom - ecc * np.sin(e_anom) - m)
        if not np.all(resid <= tol):
            raise ConvergenceError(f"Kepler solver residual {resid.max():.3e} > {tol}")
    return float(e_anom) if np.isscalar(mean_anomaly_rad) else e_anom


def _moon_inplane(days, elements: LunarElements):
    """In-plane moon position for an array of epochs.

    Returns (x_orb, y_orb) in km with x toward perigee.
    """
    m_rad = np.deg2rad(elements.mean_anomaly_at(days))
    e_anom = solve_kepler(m_rad, elements.e)
    e_anom = np.asarray(e_anom, dtype=float)
    x = elements.a_km * (np.cos(e_anom) - elements.e)
    y = elements.a_km * math.sqrt(1.0 - elements.e**2) * np.sin(e_anom)
    return x, y


def _moon_rotation(days, elements: LunarElements):
    """R2 @ R1 carrying moon-orbit-plane coordinates into ECI, per epoch."""
    r1 = rot_z(elements.raan_at(days)) @ rot_x(elements.i_deg) @ rot_z(elements.argp_at(days))
    return rot_x(OBLIQUITY_DEG) @ r1


def lce_frame(days, elements: LunarElements = DEFAULT_LUNAR_ELEMENTS):
    """LCE -> ECI transform for an array of epochs (days since J2000).

    Returns (rot, origin) where `rot` is (..., 3, 3) and `origin` (..., 3) km
    such that r_eci = rot @ v_lce + origin. The LCE x axis is aligned with
    the Earth->Moon direction by rotating through the moon's in-plane
    position angle before applying the orbit-plane orientation.
    """
    days = np.asarray(days, dtype=float)
    x, y = _moon_inplane(days, elements)
    u_deg = np.rad2deg(np.arctan2(y, x))
    r2r1 = _moon_rotation(days, elements)
    rot = r2r1 @ rot_z(-u_deg)
    inplane = np.stack([x, y, np.zeros_like(x)], axis=-1)
    origin = np.einsum("...ij,...j->...i", r2r1, inplane)
    return rot, origin


def moon_center_eci(epoch: Epoch, elements: LunarElements = DEFAULT_LUNAR_ELEMENTS):
    """Moon center position at `epoch`.

    Returns (r_orb, r_eci): the in-plane position (x toward perigee) and the
    ECI position, both km.
    """
    x, y = _moon_inplane(epoch.days_since_j2000, elements)
    r_orb = np.array([float(x), float(y), 0.0])
    r_eci = _moon_rotation(epoch.days_since_j2000, elements) @ r_orb
    return r_orb, r_eci


def eci_from_lce(v_lce: Vec3, epoch: Epoch,
                 elements: LunarElements = DEFAULT_LUNAR_ELEMENTS) -> Vec3:
    """Transform a moon-centered LCE vector into ECI at `epoch` (km)."""
    rot, origin = lce_frame(epoch.days_since_j2000, elements)
    return rot @ np.asarray(v_lce, dtype=float) + origin
