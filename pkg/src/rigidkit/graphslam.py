"""Pose-graph least squares over planar or 3D rigid poses.

A graph holds vertices (poses indexed by integer id), relative-pose
edges with information matrices, and a set of fixed vertices that pin
the gauge freedom.  Optimization is on-manifold: each free vertex is
updated multiplicatively, P <- P @ pseudo_exp(delta), with delta ordered
translation-first, and the edge residuals/Jacobians come from
:mod:`rigidkit.manifold_jac`.

chi2 is sum over edges of e^T Lambda e.  The normal equations accumulate
H = sum J^T Lambda J and b = sum J^T Lambda e, so the gradient of chi2
with respect to the stacked increments is exactly 2 b, and a step solves
H delta = -b (Gauss-Newton) or (H + lambda I) delta = -b
(Levenberg-Marquardt with multiplicative lambda schedule).

Problems up to 1500 free coordinates use a dense Cholesky solve; larger
ones assemble H sparsely and use a sparse factorization.
"""

import dataclasses
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from .core import HomPose, HomPose2
from .errors import GeometryError, RankDeficiencyError
from .lie import se2_pseudo_exp, se2_pseudo_log, se3_pseudo_exp, so3_log
from .manifold_jac import _inverse_se2, edge_error_se2, edge_error_se3
from .matderiv import inverse_rt

_DENSE_LIMIT = 1500
_LM_MAX_LAMBDA = 1e12


@dataclass(frozen=True)
class Edge:
    """Relative-pose measurement: vertex j as seen from vertex i."""

    i: int
    j: int
    delta: object
    information: np.ndarray


@dataclass(frozen=True)
class SolverConfig:
    """Settings for :func:`step` and :func:`optimize`."""

    method: str = "levenberg-marquardt"
    max_iterations: int = 50
    epsilon_gradient: float = 1e-8
    epsilon_update: float = 1e-10
    lm_initial_lambda: float = 1e-4
    lm_factor: float = 10.0

    def __post_init__(self):
        if self.method not in ("gauss-newton", "levenberg-marquardt"):
            raise GeometryError(
                "SolverConfig: method must be 'gauss-newton' or 'levenberg-marquardt'")


@dataclass(frozen=True)
class IterationStats:
    """Snapshot after one accepted step: chi2 is the value afterwards."""

    iteration: int
    chi2: float
    update_norm: float
    lambda_: float


class PoseGraph:
    """Vertices, relative-pose edges, and the fixed-vertex gauge set.

    The graph is homogeneous: either all vertices are HomPose (3D, block
    size 6) or all are HomPose2 (planar, block size 3).
    """

    def __init__(self):
        self.vertices = {}
        self.edges = []
        self.fixed = set()
        self._kind = None

    @property
    def kind(self):
        """'se2' | 'se3' | None while empty."""
        return self._kind

    @property
    def block_size(self):
        return 3 if self._kind == "se2" else 6

    def add_vertex(self, vid, pose, fixed=False):
        vid = int(vid)
        if vid in self.vertices:
            raise GeometryError("PoseGraph: duplicate vertex id %d" % vid)
        kind = self._pose_kind(pose)
        if self._kind is None:
            self._kind = kind
        elif kind != self._kind:
            raise GeometryError(
                "PoseGraph: cannot mix planar and 3D vertices (vertex %d)" % vid)
        self.vertices[vid] = pose
        if fixed:
            self.fixed.add(vid)

    def fix(self, vid):
        if vid not in self.vertices:
            raise GeometryError("PoseGraph: cannot fix unknown vertex %d" % vid)
        self.fixed.add(int(vid))

    def add_edge(self, i, j, delta, information):
        i, j = int(i), int(j)
        for vid in (i, j):
            if vid not in self.vertices:
                raise GeometryError("PoseGraph: edge endpoint %d is not a vertex" % vid)
        if self._pose_kind(delta) != self._kind:
            raise GeometryError(
                "PoseGraph: edge (%d, %d) measurement has the wrong pose type" % (i, j))
        d = self.block_size
        info = np.array(information, dtype=float)
        if info.shape != (d, d) or not np.all(np.isfinite(info)):
            raise GeometryError(
                "PoseGraph: edge (%d, %d) information must be a finite %dx%d matrix"
                % (i, j, d, d))
        if np.max(np.abs(info - info.T)) > 1e-9:
            raise GeometryError(
                "PoseGraph: edge (%d, %d) information matrix is not symmetric" % (i, j))
        info = 0.5 * (info + info.T)
        info.setflags(write=False)
        self.edges.append(Edge(i, j, delta, info))

    def copy(self):
        g = PoseGraph()
        g.vertices = dict(self.vertices)
        g.edges = list(self.edges)
        g.fixed = set(self.fixed)
        g._kind = self._kind
        return g

    @staticmethod
    def _pose_kind(pose):
        if isinstance(pose, HomPose):
            return "se3"
        if isinstance(pose, HomPose2):
            return "se2"
        raise GeometryError("PoseGraph: poses must be HomPose or HomPose2")


# ---------------------------------------------------------------------------
# residuals and objective

def _residual(kind, delta, pi, pj):
    """Edge residual value only (no Jacobians, no near-pi restriction)."""
    if kind == "se3":
        t = inverse_rt(delta.mat) @ inverse_rt(pi.mat) @ pj.mat
        return np.concatenate([t[:3, 3], so3_log(t[:3, :3])])
    t = _inverse_se2(delta.mat) @ _inverse_se2(pi.mat) @ pj.mat
    return se2_pseudo_log(t)


def chi2(g):
    """Sum over edges of e^T Lambda e at the current vertex estimates."""
    total = 0.0
    for e in g.edges:
        r = _residual(g.kind, e.delta, g.vertices[e.i], g.vertices[e.j])
        total += float(r @ e.information @ r)
    return total


def _check_gauge(g, free_ids):
    """Every component touching a free vertex must contain a fixed one."""
    if not g.vertices:
        raise GeometryError("PoseGraph: empty graph")
    if not g.fixed:
        raise RankDeficiencyError(
            "pose graph has no fixed vertex; fix at least one to pin the gauge")
    parent = {v: v for v in g.vertices}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for e in g.edges:
        ri, rj = find(e.i), find(e.j)
        if ri != rj:
            parent[ri] = rj
    anchored = {find(v) for v in g.fixed}
    loose = sorted(v for v in free_ids if find(v) not in anchored)
    if loose:
        raise RankDeficiencyError(
            "vertices not connected to any fixed vertex: %s"
            % ", ".join(str(v) for v in loose[:20]))


def build_normal_equations(g):
    """Assemble H = sum J^T Lambda J and b = sum J^T Lambda e.

    Free vertices (ascending id) get consecutive coordinate blocks.
    Returns (H, b): H is a dense ndarray up to 1500 free coordinates and
    a CSR sparse matrix beyond.

    Raises
    ------
    RankDeficiencyError
        If no vertex is fixed, or some free vertex has no path to a
        fixed one (the system would be singular by construction).
    """
    free_ids = sorted(v for v in g.vertices if v not in g.fixed)
    _check_gauge(g, free_ids)
    d = g.block_size
    slot = {vid: k * d for k, vid in enumerate(free_ids)}
    ncoord = d * len(free_ids)
    b = np.zeros(ncoord)
    dense = ncoord <= _DENSE_LIMIT
    if dense:
        h = np.zeros((ncoord, ncoord))
        triplets = None
    else:
        h = None
        triplets = ([], [], [])

    def add_block(si, sj, block):
        if dense:
            h[si:si + d, sj:sj + d] += block
        else:
            ii, jj = np.meshgrid(np.arange(si, si + d),
                                 np.arange(sj, sj + d), indexing="ij")
            triplets[0].append(ii.ravel())
            triplets[1].append(jj.ravel())
            triplets[2].append(block.ravel())

    err_fn = edge_error_se3 if g.kind == "se3" else edge_error_se2
    for e in g.edges:
        res = err_fn(e.delta, g.vertices[e.i], g.vertices[e.j])
        lam_e = e.information @ res.error
        for vid, jac in ((e.i, res.jac1), (e.j, res.jac2)):
            if vid in slot:
                b[slot[vid]:slot[vid] + d] += jac.T @ lam_e
        for vid_a, jac_a in ((e.i, res.jac1), (e.j, res.jac2)):
            if vid_a not in slot:
                continue
            for vid_b, jac_b in ((e.i, res.jac1), (e.j, res.jac2)):
                if vid_b in slot:
                    add_block(slot[vid_a], slot[vid_b],
                              jac_a.T @ e.information @ jac_b)
    if not dense:
        h = scipy.sparse.coo_matrix(
            (np.concatenate(triplets[2]),
             (np.concatenate(triplets[0]), np.concatenate(triplets[1]))),
            shape=(ncoord, ncoord)).tocsr()
    return h, b


# ---------------------------------------------------------------------------
# solving and stepping

def _solve(h, rhs, *, lm_hint):
    if scipy.sparse.issparse(h):
        try:
            lu = scipy.sparse.linalg.splu(h.tocsc())
        except RuntimeError as exc:
            raise RankDeficiencyError(_singular_msg(lm_hint)) from exc
        x = lu.solve(rhs)
        if not np.all(np.isfinite(x)):
            raise RankDeficiencyError(_singular_msg(lm_hint))
        return x
    try:
        factor = scipy.linalg.cho_factor(h)
    except np.linalg.LinAlgError as exc:
        raise RankDeficiencyError(_singular_msg(lm_hint)) from exc
    except scipy.linalg.LinAlgError as exc:  # pragma: no cover - alias guard
        raise RankDeficiencyError(_singular_msg(lm_hint)) from exc
    return scipy.linalg.cho_solve(factor, rhs)


def _singular_msg(lm_hint):
    msg = "normal equations are not positive definite"
    if lm_hint:
        msg += "; try method='levenberg-marquardt'"
    return msg


def _damped(h, lam):
    if scipy.sparse.issparse(h):
        return h + lam * scipy.sparse.identity(h.shape[0], format="csr")
    return h + lam * np.eye(h.shape[0])


def _apply_update(g, delta):
    d = g.block_size
    pexp = se3_pseudo_exp if g.kind == "se3" else se2_pseudo_exp
    cls = HomPose if g.kind == "se3" else HomPose2
    out = g.copy()
    free_ids = sorted(v for v in g.vertices if v not in g.fixed)
    for k, vid in enumerate(free_ids):
        step_pose = pexp(delta[k * d:(k + 1) * d])
        out.vertices[vid] = cls(g.vertices[vid].mat @ step_pose.mat)
    return out


def _step_core(g, cfg, h, b, lam):
    if cfg.method == "gauss-newton":
        delta = _solve(h, -b, lm_hint=True)
        out = _apply_update(g, delta)
        return out, IterationStats(0, chi2(out), float(np.linalg.norm(delta)), 0.0)
    base = chi2(g)
    while lam <= _LM_MAX_LAMBDA:
        try:
            delta = _solve(_damped(h, lam), -b, lm_hint=False)
        except RankDeficiencyError:
            lam *= cfg.lm_factor
            continue
        trial = _apply_update(g, delta)
        c = chi2(trial)
        if c < base:
            return trial, IterationStats(0, c, float(np.linalg.norm(delta)), lam)
        lam *= cfg.lm_factor
    return g, IterationStats(0, base, 0.0, lam)


def step(g, cfg, lambda_=None):
    """One optimization step.

    Gauss-Newton solves once and always applies the update.  Levenberg-
    Marquardt retries with growing lambda until a step decreases chi2,
    and reports the lambda that was accepted; if no lambda up to 1e12
    helps, the graph is returned unchanged with update_norm 0.

    Returns
    -------
    (PoseGraph, IterationStats)
        Fixed vertices are carried over untouched (same objects).
    """
    h, b = build_normal_equations(g)
    lam = cfg.lm_initial_lambda if lambda_ is None else float(lambda_)
    return _step_core(g, cfg, h, b, lam)


def optimize(g, cfg):
    """Iterate :func:`step` until convergence or the iteration budget.

    Termination: gradient max-norm below epsilon_gradient, update norm
    below epsilon_update, a Levenberg-Marquardt step that cannot decrease
    chi2 any more, or max_iterations.

    Returns
    -------
    (PoseGraph, list of IterationStats)
        Stats begin with an iteration-0 entry holding the initial chi2;
        each later entry is one accepted step.  Under Levenberg-Marquardt
        the chi2 column is non-increasing.
    """
    lm = cfg.method == "levenberg-marquardt"
    stats = [IterationStats(0, chi2(g), 0.0,
                            cfg.lm_initial_lambda if lm else 0.0)]
    cur = g
    lam = cfg.lm_initial_lambda
    for it in range(1, cfg.max_iterations + 1):
        h, b = build_normal_equations(cur)
        if b.size == 0 or float(np.max(np.abs(b))) < cfg.epsilon_gradient:
            break
        cur, st = _step_core(cur, cfg, h, b, lam)
        stats.append(dataclasses.replace(st, iteration=it))
        if lm:
            if st.update_norm == 0.0:
                break
            lam = max(st.lambda_ / cfg.lm_factor, 1e-12)
        if st.update_norm < cfg.epsilon_update:
            break
    return cur, stats


# ---------------------------------------------------------------------------
# synthetic problems

def synth_graph(kind, n, sigmas, seed):
    """Build a ground-truth graph and a noisy dead-reckoned twin.

    Parameters
    ----------
    kind : {'circle2d', 'grid2d', 'sphere3d'}
        circle2d: n poses around a circle of radius 10 with one loop
        closure; grid2d: a serpentine sweep over a square grid with
        closures between vertically adjacent cells; sphere3d: n poses on
        a rising arc of radius 8 with one loop closure.
    n : int
        Vertex count (at least 3).
    sigmas : (float, float)
        Translation / rotation noise standard deviations; the edge
        information matrices are diag(1/sigma^2, ...).
    seed : int
        Noise seed; the construction is fully deterministic.

    Returns
    -------
    (PoseGraph, PoseGraph)
        The truth graph (chi2 numerically zero) and the noisy graph:
        same topology, measurements perturbed by pseudo_exp noise on the
        right, vertex 0 fixed at the truth, other vertices dead-reckoned
        along the noisy odometry chain.
    """
    n = int(n)
    if n < 3:
        raise GeometryError("synth_graph: need at least 3 vertices")
    sig_t, sig_r = float(sigmas[0]), float(sigmas[1])
    if sig_t <= 0 or sig_r <= 0:
        raise GeometryError("synth_graph: noise sigmas must be positive")
    rng = np.random.default_rng(seed)
    if kind == "circle2d":
        poses, pairs = _circle2d(n)
    elif kind == "grid2d":
        poses, pairs = _grid2d(n)
    elif kind == "sphere3d":
        poses, pairs = _sphere3d(n)
    else:
        raise GeometryError("synth_graph: unknown kind %r" % (kind,))

    planar = isinstance(poses[0], HomPose2)
    if planar:
        info = np.diag([1.0 / sig_t ** 2, 1.0 / sig_t ** 2, 1.0 / sig_r ** 2])
        inv, pexp, cls, dt, dr = _inverse_se2, se2_pseudo_exp, HomPose2, 2, 1
    else:
        info = np.diag([1.0 / sig_t ** 2] * 3 + [1.0 / sig_r ** 2] * 3)
        inv, pexp, cls, dt, dr = inverse_rt, se3_pseudo_exp, HomPose, 3, 3

    truth = PoseGraph()
    noisy = PoseGraph()
    for vid, p in enumerate(poses):
        truth.add_vertex(vid, p, fixed=(vid == 0))
    noisy.add_vertex(0, poses[0], fixed=True)

    estimates = {0: poses[0]}
    measurements = []
    for (i, j) in pairs:
        delta = cls(inv(poses[i].mat) @ poses[j].mat)
        xi = np.concatenate([rng.normal(0.0, sig_t, size=dt),
                             rng.normal(0.0, sig_r, size=dr)])
        noisy_delta = cls(delta.mat @ pexp(xi).mat)
        measurements.append((i, j, delta, noisy_delta))
        if j == i + 1 and i in estimates and j not in estimates:
            estimates[j] = cls(estimates[i].mat @ noisy_delta.mat)
    for vid in range(1, n):
        noisy.add_vertex(vid, estimates[vid])
    for i, j, delta, noisy_delta in measurements:
        truth.add_edge(i, j, delta, info)
        noisy.add_edge(i, j, noisy_delta, info)
    return truth, noisy


def _circle2d(n):
    poses = []
    radius = 10.0
    for i in range(n):
        a = 2.0 * np.pi * i / n
        poses.append(HomPose2.from_xyt(radius * np.cos(a), radius * np.sin(a),
                                       _wrap(a + 0.5 * np.pi)))
    pairs = [(i, i + 1) for i in range(n - 1)] + [(n - 1, 0)]
    return poses, pairs


def _grid2d(n):
    side = int(np.ceil(np.sqrt(n)))
    spacing = 2.0
    poses = []
    cells = []
    for k in range(n):
        row, col = divmod(k, side)
        x = col if row % 2 == 0 else side - 1 - col  # serpentine sweep
        heading = 0.0 if row % 2 == 0 else np.pi
        poses.append(HomPose2.from_xyt(spacing * x, spacing * row, heading))
        cells.append((x, row))
    index = {c: k for k, c in enumerate(cells)}
    pairs = [(i, i + 1) for i in range(n - 1)]
    for k, (x, row) in enumerate(cells):
        above = index.get((x, row + 1))
        if above is not None and above != k + 1:
            pairs.append((k, above))
    return poses, pairs


def _sphere3d(n):
    poses = []
    radius = 8.0
    for i in range(n):
        a = 2.0 * np.pi * i / n
        c, s = np.cos(a), np.sin(a)
        yaw = a + 0.5 * np.pi
        cy, sy = np.cos(yaw), np.sin(yaw)
        tilt = 0.15 * np.sin(2.0 * a)
        ct, st = np.cos(tilt), np.sin(tilt)
        rot = (np.array([[cy, -sy, 0.0], [sy, cy, 0.0], [0.0, 0.0, 1.0]])
               @ np.array([[ct, 0.0, st], [0.0, 1.0, 0.0], [-st, 0.0, ct]]))
        t = np.array([radius * c, radius * s, 0.2 * i])
        poses.append(HomPose.from_rt(rot, t))
    pairs = [(i, i + 1) for i in range(n - 1)] + [(n - 1, 0)]
    return poses, pairs


def _wrap(a):
    return float(np.arctan2(np.sin(a), np.cos(a)))
