"""Physical constants and model defaults shared across the package.

Distances in km, times in minutes unless a name says otherwise. The toolkit
treats both Earth and Moon as uniform spheres.
"""

# Body radii (uniform-sphere model), km
R_EARTH_KM = 6371.0
R_MOON_KM = 1737.0

# Lunar gravitational parameter, m^3/s^2
GM_MOON_M3S2 = 4.903e12

# Speed of light, km/s
C_KM_S = 3.0e5

# Geostationary altitude above the Earth ellipsoid-as-sphere, km
GEO_ALTITUDE_KM = 35786.0

# Earth-Moon mean distance used to normalize the restricted three-body
# problem, km
EARTH_MOON_DIST_KM = 384400.0

# Earth-Moon mass ratio mu = m2 / (m1 + m2)
EARTH_MOON_MU = 0.012155

# Obliquity of the ecliptic used by the moon-orbit-plane -> equatorial tilt
OBLIQUITY_DEG = 23.5

# Age-of-information sentinel for devices with no relay path, in AoI units
AOI_UNREACHABLE = 2000.0

# Halo reference period, minutes (both EML1 and EML2 members use this for
# phasing so that resonant lunar orbits stay commensurate)
HALO_PERIOD_MIN = 21284.0

# Default halo out-of-plane amplitude, km
HALO_AMPLITUDE_KM = 13000.0
