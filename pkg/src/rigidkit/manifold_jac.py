"""Derivatives with respect to on-manifold increments.

A pose is perturbed multiplicatively by the pseudo-exponential of a small
tangent vector eps = (dx, dy, dz, wx, wy, wz) — translation first — and
every Jacobian here is taken at eps = 0, so no eps argument appears in
any signature.  Where the increment multiplies matters and is part of
each function's name: ``expeD`` means exp(eps) @ D (increment on the
left), ``Dexpe`` means D @ exp(eps), ``AexpeD`` sandwiches the increment
between two fixed poses.

Outputs taking values in pose space are expressed in the column-major
12-vector view of the top 3x4 block (see :mod:`rigidkit.matderiv`), which
keeps every chain rule a plain matrix product.

True and pseudo exponentials share all these derivatives: they agree to
first order at eps = 0.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NearPiRotationError
from .lie import se2_pseudo_log, so3_log
from .matderiv import d_compose_wrt_A, hat3, inverse_rt, kron

_PI_EDGE = np.pi - 1e-6


def _mat4(m):
    if hasattr(m, "mat"):
        return np.asarray(m.mat, dtype=float)
    return np.asarray(m, dtype=float)


def _mat3(m):
    if hasattr(m, "mat"):
        return np.asarray(m.mat, dtype=float)
    return np.asarray(m, dtype=float)


# ---------------------------------------------------------------------------
# exponential-map derivatives at zero

def dexp_so3_at_zero():
    """9x3 derivative of vec(rotation of exp) at the identity.

    Three stacked blocks -hat(e1), -hat(e2), -hat(e3): column j of the
    perturbed rotation moves as w x e_j.
    """
    e = np.eye(3)
    return np.vstack([-hat3(e[0]), -hat3(e[1]), -hat3(e[2])])


def dexp_so3_quat(w):
    """4x3 derivative of the rotation-vector -> quaternion map.

    Rows are (qr, qx, qy, qz); columns follow w.  At w = 0 the scalar row
    vanishes and the vector block is I3/2.
    """
    w = np.asarray(w, dtype=float)
    theta = np.linalg.norm(w)
    if theta < 1e-4:
        t2 = theta * theta
        s = 0.5 - t2 / 48.0 + t2 * t2 / 3840.0
        g = -1.0 / 24.0 + t2 / 960.0 - t2 * t2 / 107520.0
    else:
        s = np.sin(0.5 * theta) / theta
        g = (0.5 * theta * np.cos(0.5 * theta) - np.sin(0.5 * theta)) / theta ** 3
    out = np.zeros((4, 3))
    out[0] = -0.5 * s * w
    out[1:] = s * np.eye(3) + g * np.outer(w, w)
    return out


def dexp_se3_at_zero():
    """12x6 derivative of vec12 of the rigid exponential at zero.

    Translation columns reach only the translation rows (identity);
    rotation columns reproduce :func:`dexp_so3_at_zero`.
    """
    out = np.zeros((12, 6))
    out[:9, 3:] = dexp_so3_at_zero()
    out[9:, :3] = np.eye(3)
    return out


def dlog_so3(r):
    """3x9 derivative of the rotation-matrix -> rotation-vector map.

    Columns follow vec(R) (column-major).  Near the identity
    (cos(theta) > 0.999999) the constant skew-extraction pattern applies;
    elsewhere the trace-dependent rescaling adds terms on the diagonal
    entries' columns.
    """
    r = _mat3(r)[:3, :3]
    tr = r[0, 0] + r[1, 1] + r[2, 2]
    c = min(1.0, max(-1.0, 0.5 * (tr - 1.0)))
    if c > 0.999999:
        return np.array([
            [0, 0, 0, 0, 0, 0.5, 0, -0.5, 0],
            [0, 0, -0.5, 0, 0, 0, 0.5, 0, 0],
            [0, 0.5, 0, -0.5, 0, 0, 0, 0, 0],
        ], dtype=float)
    theta = np.arccos(c)
    s = np.sqrt(1.0 - c * c)
    k = (theta * c - s) / (4.0 * s ** 3)
    a1 = (r[2, 1] - r[1, 2]) * k
    a2 = (r[0, 2] - r[2, 0]) * k
    a3 = (r[1, 0] - r[0, 1]) * k
    b = theta / (2.0 * s)
    return np.array([
        [a1, 0, 0, 0, a1, b, 0, -b, a1],
        [a2, 0, -b, 0, a2, 0, b, 0, a2],
        [a3, b, 0, -b, a3, 0, 0, 0, a3],
    ], dtype=float)


def dpseudolog_se3(t):
    """6x12 derivative of the pseudo-logarithm in the 12-vector view.

    The translation block is a plain selection; the rotation block is
    :func:`dlog_so3` of the rotation part.
    """
    m = _mat4(t)
    out = np.zeros((6, 12))
    out[:3, 9:] = np.eye(3)
    out[3:, :9] = dlog_so3(m[:3, :3])
    return out


# ---------------------------------------------------------------------------
# increment on one side of a fixed pose

def jacob_expeD_de(d):
    """12x6 derivative of vec12(exp(eps) @ D) at eps = 0.

    Block pattern [[0, -hat(col_j of R_D)] for the three rotation-column
    row groups; [I3, -hat(t_D)] for the translation rows].  Identical to
    d_compose_wrt_A(D) @ dexp_se3_at_zero().
    """
    m = _mat4(d)
    out = np.zeros((12, 6))
    for j in range(3):
        out[3 * j:3 * j + 3, 3:] = -hat3(m[:3, j])
    out[9:, :3] = np.eye(3)
    out[9:, 3:] = -hat3(m[:3, 3])
    return out


def jacob_Dexpe_de(d):
    """12x6 derivative of vec12(D @ exp(eps)) at eps = 0.

    Equals kron(I4, R_D) @ dexp_se3_at_zero(): rotation columns mix the
    columns of R_D, translation rows rotate the increment.
    """
    m = _mat4(d)
    c1, c2, c3 = m[:3, 0], m[:3, 1], m[:3, 2]
    z = np.zeros(3)
    out = np.zeros((12, 6))
    out[0:3, 3:] = np.column_stack([z, -c3, c2])
    out[3:6, 3:] = np.column_stack([c3, z, -c1])
    out[6:9, 3:] = np.column_stack([-c2, c1, z])
    out[9:, :3] = m[:3, :3]
    return out


def jacob_expeDp_de(d, p):
    """3x6 derivative of (exp(eps) @ D) * p at eps = 0: [I3 | -hat(D*p)]."""
    m = _mat4(d)
    g = m[:3, :3] @ np.asarray(p, dtype=float) + m[:3, 3]
    return np.hstack([np.eye(3), -hat3(g)])


def jacob_p_ominus_expeD_de(d, p):
    """3x6 derivative of (exp(eps) @ D)^{-1} * p at eps = 0.

    [-R_D^T | M] with row i of M the cross product (column i of R_D) x p.
    """
    m = _mat4(d)
    p = np.asarray(p, dtype=float)
    r = m[:3, :3]
    rows = np.vstack([np.cross(r[:, j], p) for j in range(3)])
    return np.hstack([-r.T, rows])


def jacob_AexpeD_de(a, d):
    """12x6 derivative of vec12(A @ exp(eps) @ D) at eps = 0.

    Equals kron(I4, R_A) @ jacob_expeD_de(D).
    """
    ra = _mat4(a)[:3, :3]
    return kron(np.eye(4), ra) @ jacob_expeD_de(d)


def jacob_AexpeDp_de(a, d, p, approx=False):
    """3x6 derivative of (A @ exp(eps) @ D) * p at eps = 0.

    With approx=True both outer poses are treated as near the identity
    and the cheap pattern [I3 | -hat(p + t_D)] is returned instead of the
    exact R_A @ [I3 | -hat(D*p)].
    """
    md = _mat4(d)
    p = np.asarray(p, dtype=float)
    if approx:
        return np.hstack([np.eye(3), -hat3(p + md[:3, 3])])
    ra = _mat4(a)[:3, :3]
    return ra @ jacob_expeDp_de(d, p)


def jacob_p_ominus_AexpeD_de(a, d, p):
    """3x6 derivative of (A @ exp(eps) @ D)^{-1} * p at eps = 0."""
    ma = _mat4(a)
    md = _mat4(d)
    p = np.asarray(p, dtype=float)
    mad = ma @ md
    left = np.zeros((3, 12))
    left[:, :9] = kron(np.eye(3), (p - mad[:3, 3])[None, :])
    left[:, 9:] = -mad[:3, :3].T
    return left @ jacob_AexpeD_de(a, d)


# ---------------------------------------------------------------------------
# relative-pose (edge) errors

@dataclass(frozen=True)
class EdgeErrorSE3:
    """Residual of a measured relative pose and its two 6x6 Jacobians."""

    error: np.ndarray
    jac1: np.ndarray
    jac2: np.ndarray


@dataclass(frozen=True)
class EdgeErrorSE2:
    """Planar residual of a measured relative pose with 3x3 Jacobians."""

    error: np.ndarray
    jac1: np.ndarray
    jac2: np.ndarray


def edge_error_se3(d, p1, p2):
    """Pseudo-log residual of measurement D against poses P1, P2.

    e = pseudo_log(D^{-1} P1^{-1} P2), with Jacobians w.r.t. right-
    multiplicative increments of P1 and P2 (the optimizer's update rule).

    Raises
    ------
    NearPiRotationError
        When the residual rotation angle is within 1e-6 of pi, where the
        log derivative factors are unusable.
    """
    md = _mat4(d)
    m1 = _mat4(p1)
    m2 = _mat4(p2)
    d_inv = inverse_rt(md)
    b = inverse_rt(m1) @ m2
    t_err = d_inv @ b
    w = so3_log(t_err[:3, :3])
    if np.linalg.norm(w) > _PI_EDGE:
        raise NearPiRotationError(
            "edge_error_se3: residual rotation within 1e-6 of pi")
    e = np.concatenate([t_err[:3, 3], w])
    dlog = dpseudolog_se3(t_err)
    j1 = dlog @ d_compose_wrt_A(b) @ (-jacob_Dexpe_de(d_inv))
    j2 = dlog @ jacob_Dexpe_de(t_err)
    return EdgeErrorSE3(e, j1, j2)


# ---------------------------------------------------------------------------
# planar versions

def jacob_Dexpe_de_se2(d):
    """3x3 derivative of params(D @ exp(eps)) at eps = 0 for planar poses."""
    m = _mat3(d)
    out = np.eye(3)
    out[:2, :2] = m[:2, :2]
    return out


def d_compose_se2_wrt_A(a, b):
    """3x3 derivative of params(A @ B) w.r.t. (x_A, y_A, phi_A)."""
    ma = _mat3(a)
    mb = _mat3(b)
    sa, ca = ma[1, 0], ma[0, 0]
    xb, yb = mb[0, 2], mb[1, 2]
    out = np.eye(3)
    out[0, 2] = -xb * sa - yb * ca
    out[1, 2] = xb * ca - yb * sa
    return out


def d_compose_se2_wrt_B(a):
    """3x3 derivative of params(A @ B) w.r.t. (x_B, y_B, phi_B)."""
    return jacob_Dexpe_de_se2(a)


def _inverse_se2(m):
    r = m[:2, :2]
    out = np.eye(3)
    out[:2, :2] = r.T
    out[:2, 2] = -r.T @ m[:2, 2]
    return out


def edge_error_se2(d, p1, p2):
    """Planar pseudo-log residual e = params(D^{-1} P1^{-1} P2).

    The angle component is the atan2 of the residual rotation, hence
    already wrapped to (-pi, pi].  Jacobians follow right-multiplicative
    increments of P1 and P2.
    """
    md = _mat3(d)
    m1 = _mat3(p1)
    m2 = _mat3(p2)
    d_inv = _inverse_se2(md)
    b = _inverse_se2(m1) @ m2
    t_err = d_inv @ b
    e = se2_pseudo_log(t_err)
    j1 = d_compose_se2_wrt_A(d_inv, b) @ (-jacob_Dexpe_de_se2(d_inv))
    j2 = jacob_Dexpe_de_se2(t_err)
    return EdgeErrorSE2(e, j1, j2)
