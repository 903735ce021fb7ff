"""Vector algebra for heliostat optics.

World coordinates X'Y'Z': X' points from South to North, Y' from East to
West and Z' from Nadir to Zenith.  All positions are in meters and the
receiver centre sits at the origin.  Directions are plain numpy arrays of
shape (3,) holding unit vectors; sun directions follow the convention of
``sun.sun_vector`` (azimuth from due South, positive toward West).

The heliostat frame XYZ is attached to the mirror assembly: X is the
tracking normal, Y the horizontal lateral axis and Z the in-plane "up"
axis, as produced by an azimuth-elevation mount.
"""

from dataclasses import dataclass

import numpy as np

from .errors import BacklitMirror, DegenerateGeometry

WORLD_UP = np.array([0.0, 0.0, 1.0])


def normalize(v):
    """Return ``v`` scaled to unit length."""
    v = np.asarray(v, dtype=float)
    n = np.sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2])
    if n == 0.0:
        raise DegenerateGeometry("cannot normalize a zero vector")
    return v / n


def cross(a, b):
    """Cross product written out component-wise (keeps mirror runs bit-exact)."""
    return np.array([
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ])


def reflect(sun, normal):
    """Specular reflection of the sun direction about a mirror normal.

    Both arguments are unit vectors pointing away from the surface.  The
    outgoing direction is 2 (S.N) N - S, unit length whenever the inputs
    are, and satisfies R.N = S.N.

    Raises BacklitMirror when the sun is on the non-reflective side
    (S.N <= 0).
    """
    c = sun[0] * normal[0] + sun[1] * normal[1] + sun[2] * normal[2]
    if c <= 0.0:
        raise BacklitMirror(f"sun is behind the mirror (S.N = {c:.6g})")
    return 2.0 * c * normal - sun


@dataclass(frozen=True)
class ReflectionGeometry:
    """Sun direction, target direction, bisecting normal and incidence angle.

    The three unit vectors satisfy S + R = 2 cos(i) N, the vector form of
    the specular reflection law.
    """

    sun: np.ndarray
    target: np.ndarray
    normal: np.ndarray
    incidence: float  # radians


def bisector_normal(sun, target):
    """Mirror normal that reflects ``sun`` into ``target``.

    N = (S + R) / sqrt(2 (1 + S.R)) is unit length by construction and
    bisects the two directions; the returned incidence angle is
    arccos(S.N).  Anti-parallel inputs have no bisector and are rejected.
    """
    s_dot_r = sun[0] * target[0] + sun[1] * target[1] + sun[2] * target[2]
    if 1.0 + s_dot_r <= 1e-12:
        raise DegenerateGeometry("sun and target are anti-parallel; bisector undefined")
    normal = (sun + target) / np.sqrt(2.0 * (1.0 + s_dot_r))
    c = sun[0] * normal[0] + sun[1] * normal[1] + sun[2] * normal[2]
    incidence = float(np.arccos(min(1.0, max(-1.0, c))))
    return ReflectionGeometry(sun=sun, target=target, normal=normal, incidence=incidence)


@dataclass(frozen=True)
class Frame3:
    """Right-handed orthonormal frame with an origin, axes as unit vectors."""

    origin: np.ndarray
    axis_x: np.ndarray
    axis_y: np.ndarray
    axis_z: np.ndarray

    @property
    def matrix(self):
        """3x3 matrix whose columns are the frame axes (local -> world rotation)."""
        return np.column_stack((self.axis_x, self.axis_y, self.axis_z))

    def to_world(self, local):
        """Map local coordinates (..., 3) to world coordinates."""
        local = np.asarray(local, dtype=float)
        m = self.matrix
        return self.origin + local @ m.T

    def to_local(self, world):
        """Map world coordinates (..., 3) to frame coordinates."""
        world = np.asarray(world, dtype=float)
        return (world - self.origin) @ self.matrix


def heliostat_frame(normal, origin=None):
    """Heliostat frame for a given tracking normal.

    axis_x is the normal itself, axis_y = Z' x normal normalized (always
    horizontal), axis_z completes the right-handed triad and has a positive
    Z' component.  Normals within 1e-6 of vertical leave the horizontal
    axis undefined and are rejected.
    """
    lateral = np.hypot(normal[0], normal[1])
    if lateral < 1e-6:
        raise DegenerateGeometry("normal is (nearly) vertical; heliostat azimuth undefined")
    axis_y = np.array([-normal[1], normal[0], 0.0]) / lateral
    axis_z = cross(normal, axis_y)
    if origin is None:
        origin = np.zeros(3)
    return Frame3(origin=np.asarray(origin, dtype=float), axis_x=normal,
                  axis_y=axis_y, axis_z=axis_z)
