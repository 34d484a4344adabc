"""Pose types and conversions between the three parameterizations.

Three interchangeable descriptions of a rigid body's placement:

``EulerPose``
    (x, y, z, yaw, pitch, roll).  The rotation applies roll about x,
    then pitch about y, then yaw about z (all intrinsic ZYX order when
    read as R = Rz(yaw) @ Ry(pitch) @ Rx(roll)).
``QuatPose``
    (x, y, z) plus a unit quaternion stored scalar-first (qr, qx, qy, qz)
    with the canonical sign qr >= 0.
``HomPose``
    A 4x4 homogeneous matrix with orthonormal rotation block.

Every conversion has an analytic Jacobian suitable for first-order
covariance propagation; :func:`convert_gaussian` applies them to a
Gaussian pose.  Operations that consume quaternions re-normalize them
internally and chain the normalization Jacobian, so the Jacobians are
derivatives of what the functions actually compute, entry for entry.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import GeometryError, SingularConfigurationError

_GIMBAL_DELTA = 0.5 - 1e-7


def wrap_angle(a):
    """Wrap an angle to (-pi, pi]."""
    r = math.remainder(float(a), 2.0 * math.pi)
    if r <= -math.pi:
        r = math.pi
    return r


# ---------------------------------------------------------------------------
# types

@dataclass(frozen=True)
class Quaternion:
    """Scalar-first quaternion (qr, qx, qy, qz).

    The constructor enforces the canonical sign qr >= 0 by flipping all
    four components when needed (both signs describe the same rotation).
    Unit norm is not enforced here: quat_normalize legitimately takes
    non-unit input.
    """

    qr: float
    qx: float
    qy: float
    qz: float

    def __post_init__(self):
        vals = [float(self.qr), float(self.qx), float(self.qy), float(self.qz)]
        if not all(math.isfinite(v) for v in vals):
            raise GeometryError("Quaternion: non-finite component")
        if vals[0] < 0.0:
            vals = [-v for v in vals]
        for name, v in zip(("qr", "qx", "qy", "qz"), vals):
            object.__setattr__(self, name, v)

    @property
    def vec(self):
        return np.array([self.qr, self.qx, self.qy, self.qz])

    @property
    def norm(self):
        return float(np.linalg.norm(self.vec))


@dataclass(frozen=True)
class EulerPose:
    """Pose as (x, y, z, yaw, pitch, roll), angles in radians.

    yaw and roll are wrapped to (-pi, pi] on construction; pitch must
    already lie in [-pi/2, pi/2] (wrapping it would silently change yaw
    and roll as well, so out-of-range pitch raises instead).
    """

    x: float
    y: float
    z: float
    yaw: float
    pitch: float
    roll: float

    def __post_init__(self):
        vals = [float(getattr(self, n)) for n in ("x", "y", "z", "yaw", "pitch", "roll")]
        if not all(math.isfinite(v) for v in vals):
            raise GeometryError("EulerPose: non-finite component")
        object.__setattr__(self, "x", vals[0])
        object.__setattr__(self, "y", vals[1])
        object.__setattr__(self, "z", vals[2])
        object.__setattr__(self, "yaw", wrap_angle(vals[3]))
        pitch = vals[4]
        if abs(pitch) > 0.5 * math.pi + 1e-9:
            raise GeometryError("EulerPose: pitch outside [-pi/2, pi/2]")
        pitch = min(0.5 * math.pi, max(-0.5 * math.pi, pitch))
        object.__setattr__(self, "pitch", pitch)
        object.__setattr__(self, "roll", wrap_angle(vals[5]))

    @property
    def vec(self):
        return np.array([self.x, self.y, self.z, self.yaw, self.pitch, self.roll])

    @classmethod
    def from_vec(cls, v):
        v = np.asarray(v, dtype=float)
        return cls(v[0], v[1], v[2], v[3], v[4], v[5])


@dataclass(frozen=True)
class QuatPose:
    """Pose as translation plus unit quaternion."""

    x: float
    y: float
    z: float
    q: Quaternion

    def __post_init__(self):
        for n in ("x", "y", "z"):
            v = float(getattr(self, n))
            if not math.isfinite(v):
                raise GeometryError("QuatPose: non-finite translation")
            object.__setattr__(self, n, v)
        if abs(self.q.norm - 1.0) > 1e-6:
            raise GeometryError("QuatPose: quaternion is not unit length")

    @property
    def vec(self):
        return np.concatenate([[self.x, self.y, self.z], self.q.vec])

    @classmethod
    def from_vec(cls, v):
        v = np.asarray(v, dtype=float)
        return cls(v[0], v[1], v[2], Quaternion(v[3], v[4], v[5], v[6]))


@dataclass(frozen=True)
class HomPose:
    """Pose as a 4x4 homogeneous matrix.

    The bottom row must be exactly (0, 0, 0, 1); the rotation block must
    be orthonormal (Frobenius defect below 1e-9) with determinant +1.
    """

    mat: np.ndarray

    def __post_init__(self):
        m = np.array(self.mat, dtype=float)
        if m.shape != (4, 4):
            raise GeometryError("HomPose: matrix must be 4x4")
        if not np.all(np.isfinite(m)):
            raise GeometryError("HomPose: non-finite entry")
        if not (m[3, 0] == 0.0 and m[3, 1] == 0.0 and m[3, 2] == 0.0 and m[3, 3] == 1.0):
            raise GeometryError("HomPose: bottom row must be (0, 0, 0, 1)")
        r = m[:3, :3]
        if np.linalg.norm(r.T @ r - np.eye(3)) >= 1e-9:
            raise GeometryError("HomPose: rotation block is not orthonormal")
        if abs(np.linalg.det(r) - 1.0) >= 1e-9:
            raise GeometryError("HomPose: rotation block must have determinant +1")
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)

    @property
    def rotation(self):
        return self.mat[:3, :3].copy()

    @property
    def translation(self):
        return self.mat[:3, 3].copy()

    @property
    def vec12(self):
        return self.mat[:3, :4].reshape(-1, order="F").copy()

    @classmethod
    def from_rt(cls, r, t):
        m = np.eye(4)
        m[:3, :3] = np.asarray(r, dtype=float)
        m[:3, 3] = np.asarray(t, dtype=float)
        return cls(m)

    @classmethod
    def from_vec12(cls, v):
        v = np.asarray(v, dtype=float)
        m = np.eye(4)
        m[:3, :4] = v.reshape((3, 4), order="F")
        return cls(m)

    @classmethod
    def identity(cls):
        return cls(np.eye(4))


@dataclass(frozen=True)
class HomPose2:
    """Planar pose as a 3x3 homogeneous matrix."""

    mat: np.ndarray

    def __post_init__(self):
        m = np.array(self.mat, dtype=float)
        if m.shape != (3, 3):
            raise GeometryError("HomPose2: matrix must be 3x3")
        if not np.all(np.isfinite(m)):
            raise GeometryError("HomPose2: non-finite entry")
        if not (m[2, 0] == 0.0 and m[2, 1] == 0.0 and m[2, 2] == 1.0):
            raise GeometryError("HomPose2: bottom row must be (0, 0, 1)")
        r = m[:2, :2]
        if np.linalg.norm(r.T @ r - np.eye(2)) >= 1e-9:
            raise GeometryError("HomPose2: rotation block is not orthonormal")
        if np.linalg.det(r) <= 0.0:
            raise GeometryError("HomPose2: rotation block must have determinant +1")
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)

    @property
    def rotation(self):
        return self.mat[:2, :2].copy()

    @property
    def translation(self):
        return self.mat[:2, 2].copy()

    @property
    def angle(self):
        return float(np.arctan2(self.mat[1, 0], self.mat[0, 0]))

    @classmethod
    def from_xyt(cls, x, y, theta):
        c, s = np.cos(theta), np.sin(theta)
        return cls(np.array([[c, -s, float(x)], [s, c, float(y)], [0.0, 0.0, 1.0]]))

    @classmethod
    def identity(cls):
        return cls(np.eye(3))


_KIND_DIM = {"ypr": 6, "quat": 7, "matrix": 12}


def pose_kind(p):
    """Parameterization tag ('ypr' | 'quat' | 'matrix') of a pose value."""
    if isinstance(p, EulerPose):
        return "ypr"
    if isinstance(p, QuatPose):
        return "quat"
    if isinstance(p, HomPose):
        return "matrix"
    raise GeometryError("unknown pose type: %r" % (type(p).__name__,))


def pose_param_vector(p):
    """Flat parameter vector of a pose (length 6, 7 or 12)."""
    if isinstance(p, HomPose):
        return p.vec12
    return p.vec


@dataclass(frozen=True)
class GaussianPose:
    """Gaussian over one pose parameterization: mean pose + covariance.

    The covariance dimension follows the parameterization (6 for Euler,
    7 for quaternion, 12 for the flattened matrix).  It must be symmetric
    to 1e-12 and positive semidefinite up to -1e-10 on the spectrum; the
    stored matrix is re-symmetrized exactly.
    """

    mean: object
    cov: np.ndarray

    def __post_init__(self):
        kind = pose_kind(self.mean)
        dim = _KIND_DIM[kind]
        c = np.array(self.cov, dtype=float)
        if c.shape != (dim, dim):
            raise GeometryError(
                "GaussianPose: covariance must be %dx%d for a %s pose" % (dim, dim, kind))
        if not np.all(np.isfinite(c)):
            raise GeometryError("GaussianPose: non-finite covariance entry")
        if np.max(np.abs(c - c.T)) > 1e-12:
            raise GeometryError("GaussianPose: covariance is not symmetric")
        c = 0.5 * (c + c.T)
        if np.min(np.linalg.eigvalsh(c)) < -1e-10:
            raise GeometryError("GaussianPose: covariance has a significantly negative eigenvalue")
        c.setflags(write=False)
        object.__setattr__(self, "cov", c)

    @property
    def kind(self):
        return pose_kind(self.mean)


# ---------------------------------------------------------------------------
# raw scalar kernels (no type validation; shared with the numeric checks)

def _quat_components_from_angles(yaw, pitch, roll):
    """Half-angle product formulas, without the canonical sign flip."""
    cy, sy = np.cos(0.5 * yaw), np.sin(0.5 * yaw)
    cp, sp = np.cos(0.5 * pitch), np.sin(0.5 * pitch)
    cr, sr = np.cos(0.5 * roll), np.sin(0.5 * roll)
    return np.array([
        cr * cp * cy + sr * sp * sy,
        sr * cp * cy - cr * sp * sy,
        cr * sp * cy + sr * cp * sy,
        cr * cp * sy - sr * sp * cy,
    ])


def _rotation_from_angles(yaw, pitch, roll):
    cy, sy = np.cos(yaw), np.sin(yaw)
    cp, sp = np.cos(pitch), np.sin(pitch)
    cr, sr = np.cos(roll), np.sin(roll)
    return np.array([
        [cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr],
        [sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr],
        [-sp, cp * sr, cp * cr],
    ])


def _rotation_from_unit_quat(qr, qx, qy, qz):
    return np.array([
        [qr * qr + qx * qx - qy * qy - qz * qz,
         2.0 * (qx * qy - qr * qz),
         2.0 * (qz * qx + qr * qy)],
        [2.0 * (qx * qy + qr * qz),
         qr * qr - qx * qx + qy * qy - qz * qz,
         2.0 * (qy * qz - qr * qx)],
        [2.0 * (qz * qx - qr * qy),
         2.0 * (qy * qz + qr * qx),
         qr * qr - qx * qx - qy * qy + qz * qz],
    ])


def _angles_from_rotation(r):
    """(yaw, pitch, roll) from a 3x3 array, defined entrywise (no checks).

    Works on slightly non-orthonormal input; the degenerate branches fire
    when the (1,1)/(2,1) column part vanishes (|pitch| = pi/2).
    """
    k = r[0, 0] * r[0, 0] + r[1, 0] * r[1, 0]
    sk = np.sqrt(k)
    pitch = np.arctan2(-r[2, 0], sk)
    if sk < 1e-9:
        roll = 0.0
        if r[2, 0] < 0.0:  # pitch = +pi/2
            yaw = np.arctan2(r[1, 2], r[0, 2])
        else:
            yaw = np.arctan2(-r[1, 2], -r[0, 2])
    else:
        yaw = np.arctan2(r[1, 0], r[0, 0])
        roll = np.arctan2(r[2, 1], r[2, 2])
    return yaw, pitch, roll


def _norm_jacobian(qvec):
    """4x4 derivative of q -> q/|q|."""
    n2 = float(np.dot(qvec, qvec))
    n = np.sqrt(n2)
    return (n2 * np.eye(4) - np.outer(qvec, qvec)) / (n2 * n)


def _ypr_rate_block(q):
    """3x4 derivative of the (yaw, pitch, roll) extraction at a unit q.

    Raises in the gimbal band where the Euler chart is singular.
    """
    qr, qx, qy, qz = q
    delta = qr * qy - qx * qz
    if abs(delta) > _GIMBAL_DELTA:
        raise SingularConfigurationError(
            "quaternion-to-Euler Jacobian undefined near |pitch| = pi/2")
    out = np.zeros((3, 4))
    n1 = 2.0 * (qr * qz + qx * qy)
    d1 = 1.0 - 2.0 * (qy * qy + qz * qz)
    dn1 = 2.0 * np.array([qz, qy, qx, qr])
    dd1 = np.array([0.0, 0.0, -4.0 * qy, -4.0 * qz])
    out[0] = (d1 * dn1 - n1 * dd1) / (n1 * n1 + d1 * d1)
    out[1] = 2.0 * np.array([qy, -qz, qr, -qx]) / np.sqrt(1.0 - 4.0 * delta * delta)
    n3 = 2.0 * (qr * qx + qy * qz)
    d3 = 1.0 - 2.0 * (qx * qx + qy * qy)
    dn3 = 2.0 * np.array([qx, qr, qz, qy])
    dd3 = np.array([0.0, -4.0 * qx, -4.0 * qy, 0.0])
    out[2] = (d3 * dn3 - n3 * dd3) / (n3 * n3 + d3 * d3)
    return out


# ---------------------------------------------------------------------------
# conversions

def quat_normalize(q):
    """Normalize a quaternion to unit length.

    Returns
    -------
    (Quaternion, (4, 4) ndarray)
        The unit quaternion and the derivative of q -> q/|q| at the
        input.  Idempotent on already-unit input.

    Raises
    ------
    GeometryError
        For (numerically) zero norm.
    """
    v = q.vec
    n = np.linalg.norm(v)
    if n < 1e-12:
        raise GeometryError("quat_normalize: zero-norm quaternion")
    u = v / n
    return Quaternion(u[0], u[1], u[2], u[3]), _norm_jacobian(v)


def ypr_to_quat(p):
    """Euler pose -> quaternion pose (canonical sign)."""
    c = _quat_components_from_angles(p.yaw, p.pitch, p.roll)
    return QuatPose(p.x, p.y, p.z, Quaternion(c[0], c[1], c[2], c[3]))


def jacobian_ypr_to_quat(p):
    """7x6 derivative of :func:`ypr_to_quat`.

    Differentiates the half-angle product formulas themselves; the
    canonical sign flip is a discrete representative choice and is not
    part of the map.
    """
    cy, sy = np.cos(0.5 * p.yaw), np.sin(0.5 * p.yaw)
    cp, sp = np.cos(0.5 * p.pitch), np.sin(0.5 * p.pitch)
    cr, sr = np.cos(0.5 * p.roll), np.sin(0.5 * p.roll)
    ccc = cr * cp * cy
    ccs = cr * cp * sy
    csc = cr * sp * cy
    css = cr * sp * sy
    scc = sr * cp * cy
    scs = sr * cp * sy
    ssc = sr * sp * cy
    sss = sr * sp * sy
    dq = 0.5 * np.array([
        [ssc - ccs, scs - csc, css - scc],
        [-(csc + scs), -(ssc + ccs), ccc + sss],
        [scc - css, ccc - sss, ccs - ssc],
        [ccc + sss, -(css + scc), -(csc + scs)],
    ])
    out = np.zeros((7, 6))
    out[:3, :3] = np.eye(3)
    out[3:, 3:] = dq
    return out


def quat_to_ypr(p):
    """Quaternion pose -> Euler pose.

    The quaternion is normalized internally.  Within the gimbal band
    (|qr*qy - qx*qz| above 0.5 - 1e-7) the dedicated |pitch| = pi/2
    branches fire, with roll fixed to zero.
    """
    u, _ = quat_normalize(p.q)
    qr, qx, qy, qz = u.vec
    delta = qr * qy - qx * qz
    if delta <= -_GIMBAL_DELTA:
        yaw = 2.0 * np.arctan2(qx, qr)
        return EulerPose(p.x, p.y, p.z, yaw, -0.5 * np.pi, 0.0)
    if delta >= _GIMBAL_DELTA:
        yaw = -2.0 * np.arctan2(qx, qr)
        return EulerPose(p.x, p.y, p.z, yaw, 0.5 * np.pi, 0.0)
    yaw = np.arctan2(2.0 * (qr * qz + qx * qy), 1.0 - 2.0 * (qy * qy + qz * qz))
    pitch = np.arcsin(min(1.0, max(-1.0, 2.0 * delta)))
    roll = np.arctan2(2.0 * (qr * qx + qy * qz), 1.0 - 2.0 * (qx * qx + qy * qy))
    return EulerPose(p.x, p.y, p.z, yaw, pitch, roll)


def jacobian_quat_to_ypr(p):
    """6x7 derivative of :func:`quat_to_ypr` (normalization chained).

    Raises
    ------
    SingularConfigurationError
        In the gimbal band, where the Euler angles are not a chart.
    """
    u, jn = quat_normalize(p.q)
    block = _ypr_rate_block(u.vec) @ jn
    out = np.zeros((6, 7))
    out[:3, :3] = np.eye(3)
    out[3:, 3:] = block
    return out


def ypr_to_matrix(p):
    """Euler pose -> homogeneous matrix pose."""
    return HomPose.from_rt(_rotation_from_angles(p.yaw, p.pitch, p.roll),
                           [p.x, p.y, p.z])


def quat_to_matrix(p):
    """Quaternion pose -> homogeneous matrix pose (normalizes internally)."""
    u, _ = quat_normalize(p.q)
    return HomPose.from_rt(_rotation_from_unit_quat(*u.vec), [p.x, p.y, p.z])


def matrix_to_ypr(m):
    """Homogeneous matrix pose -> Euler pose."""
    r = m.mat
    yaw, pitch, roll = _angles_from_rotation(r[:3, :3])
    return EulerPose(r[0, 3], r[1, 3], r[2, 3], yaw, pitch, roll)


def matrix_to_quat(m):
    """Homogeneous matrix pose -> quaternion pose, via the Euler route."""
    return ypr_to_quat(matrix_to_ypr(m))


def jacobian_ypr_wrt_matrix(m):
    """6x12 derivative of :func:`matrix_to_ypr` in the 12-vector view.

    Rows are (x, y, z, yaw, pitch, roll); columns are the column-major
    entries of the top 3x4 block (rotation columns, then translation).

    Raises
    ------
    SingularConfigurationError
        When the pitch or roll extraction is at a singular configuration
        (first column aligned with z, or third row's yz part vanishing).
    """
    r = np.asarray(m.mat if hasattr(m, "mat") else m, dtype=float)[:3, :3]
    k = r[0, 0] * r[0, 0] + r[1, 0] * r[1, 0]
    m33 = r[2, 1] * r[2, 1] + r[2, 2] * r[2, 2]
    if k <= 1e-12 or m33 <= 1e-12:
        raise SingularConfigurationError(
            "Euler-from-matrix Jacobian undefined at |pitch| = pi/2")
    sk = np.sqrt(k)
    kp = k + r[2, 0] * r[2, 0]
    out = np.zeros((6, 12))
    out[:3, 9:] = np.eye(3)
    ang = np.zeros((3, 9))
    ang[0, 0] = -r[1, 0] / k
    ang[0, 1] = r[0, 0] / k
    ang[1, 0] = r[0, 0] * r[2, 0] / (sk * kp)
    ang[1, 1] = r[1, 0] * r[2, 0] / (sk * kp)
    ang[1, 2] = -sk / kp
    ang[2, 5] = r[2, 2] / m33
    ang[2, 8] = -r[2, 1] / m33
    out[3:, :9] = ang
    return out


def jacobian_matrix_wrt_ypr(p):
    """12x6 derivative of :func:`ypr_to_matrix` in the 12-vector view."""
    cy, sy = np.cos(p.yaw), np.sin(p.yaw)
    cp, sp = np.cos(p.pitch), np.sin(p.pitch)
    cr, sr = np.cos(p.roll), np.sin(p.roll)
    d_yaw = np.array([
        [-sy * cp, -sy * sp * sr - cy * cr, -sy * sp * cr + cy * sr],
        [cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr],
        [0.0, 0.0, 0.0],
    ])
    d_pitch = np.array([
        [-cy * sp, cy * cp * sr, cy * cp * cr],
        [-sy * sp, sy * cp * sr, sy * cp * cr],
        [-cp, -sp * sr, -sp * cr],
    ])
    d_roll = np.array([
        [0.0, cy * sp * cr + sy * sr, -cy * sp * sr + sy * cr],
        [0.0, sy * sp * cr - cy * sr, -sy * sp * sr - cy * cr],
        [0.0, cp * cr, -cp * sr],
    ])
    out = np.zeros((12, 6))
    out[9:, :3] = np.eye(3)
    for j, d in enumerate((d_yaw, d_pitch, d_roll)):
        out[:9, 3 + j] = d.reshape(-1, order="F")
    return out


def _rotation_quat_rate(qr, qx, qy, qz):
    """9x4 derivative of vec(R(q)) for the unit-quaternion quadratic form."""
    rows = [
        (2 * qr, 2 * qx, -2 * qy, -2 * qz),   # R11
        (2 * qz, 2 * qy, 2 * qx, 2 * qr),     # R21
        (-2 * qy, 2 * qz, -2 * qr, 2 * qx),   # R31
        (-2 * qz, 2 * qy, 2 * qx, -2 * qr),   # R12
        (2 * qr, -2 * qx, 2 * qy, -2 * qz),   # R22
        (2 * qx, 2 * qr, 2 * qz, 2 * qy),     # R32
        (2 * qy, 2 * qz, 2 * qr, 2 * qx),     # R13
        (-2 * qx, -2 * qr, 2 * qz, 2 * qy),   # R23
        (2 * qr, -2 * qx, -2 * qy, 2 * qz),   # R33
    ]
    return np.array(rows, dtype=float)


def jacobian_matrix_wrt_quat(p):
    """12x7 derivative of :func:`quat_to_matrix` (normalization chained)."""
    u, jn = quat_normalize(p.q)
    out = np.zeros((12, 7))
    out[9:, :3] = np.eye(3)
    out[:9, 3:] = _rotation_quat_rate(*u.vec) @ jn
    return out


def convert_gaussian(src, target):
    """Convert a Gaussian pose to another parameterization.

    First-order propagation: the mean is converted exactly, the
    covariance maps through the conversion Jacobian (J Sigma J^T,
    re-symmetrized).

    Parameters
    ----------
    src : GaussianPose
    target : str
        'ypr', 'quat' or 'matrix'.
    """
    if target not in _KIND_DIM:
        raise GeometryError("convert_gaussian: unknown target %r" % (target,))
    kind = src.kind
    if kind == target:
        return GaussianPose(src.mean, src.cov)
    mean, jac = _CONVERSIONS[(kind, target)](src.mean)
    cov = jac @ src.cov @ jac.T
    return GaussianPose(mean, 0.5 * (cov + cov.T))


def _signed_quat_rows(p, jac):
    """Align a raw-map Jacobian with the canonical (qr >= 0) mean.

    The reported mean quaternion is sign-flipped whenever the raw
    half-angle scalar comes out negative; a covariance propagated around
    that mean must use the derivative of the flipped representative, or
    the translation-rotation cross terms come out with the wrong sign.
    """
    if _quat_components_from_angles(p.yaw, p.pitch, p.roll)[0] < 0.0:
        jac = jac.copy()
        jac[3:, :] = -jac[3:, :]
    return jac


def _conv_ypr_quat(p):
    return ypr_to_quat(p), _signed_quat_rows(p, jacobian_ypr_to_quat(p))


def _conv_quat_ypr(p):
    return quat_to_ypr(p), jacobian_quat_to_ypr(p)


def _conv_ypr_matrix(p):
    return ypr_to_matrix(p), jacobian_matrix_wrt_ypr(p)


def _conv_matrix_ypr(m):
    return matrix_to_ypr(m), jacobian_ypr_wrt_matrix(m)


def _conv_quat_matrix(p):
    return quat_to_matrix(p), jacobian_matrix_wrt_quat(p)


def _conv_matrix_quat(m):
    e = matrix_to_ypr(m)
    jac = _signed_quat_rows(e, jacobian_ypr_to_quat(e)) @ jacobian_ypr_wrt_matrix(m)
    return ypr_to_quat(e), jac


_CONVERSIONS = {
    ("ypr", "quat"): _conv_ypr_quat,
    ("quat", "ypr"): _conv_quat_ypr,
    ("ypr", "matrix"): _conv_ypr_matrix,
    ("matrix", "ypr"): _conv_matrix_ypr,
    ("quat", "matrix"): _conv_quat_matrix,
    ("matrix", "quat"): _conv_matrix_quat,
}
