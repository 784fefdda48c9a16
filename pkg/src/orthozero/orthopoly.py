"""Orthonormal polynomials for W^2 = exp(-2Q): recurrence coefficients by a
discretized Stieltjes procedure, overflow-safe evaluation, and the diagonal
reproducing-kernel sums that feed the zero-density formula.

The three-term recurrence in orthonormal form is

    b_{k+1} p_{k+1}(x) = (x - a_k) p_k(x) - b_k p_{k-1}(x),

with p_0 = gamma_0 = 1/sqrt(m_0) and leading coefficients
gamma_k = gamma_0 / prod_{j<=k} b_j.  For even weights every a_k vanishes
and is stored as an exact zero.

The Stieltjes iteration runs in extended precision: the discretized measure
exp(-2Q) underflows double precision well inside the support needed once
the degree reaches a few hundred, which would silently truncate the measure
and corrupt the high-order coefficients.  Coefficients are stored in double
precision; leading coefficients are kept in log form as well, since
gamma_k itself underflows for large k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DiscretizationError, DomainError
from .quadrature import gl_rule
from .scaling import ScalingInfo, equilibrium_density_many, solve_mrs
from .weights import WeightSpec

# mantissas are renormalized once they pass 2^250; the factor 2^256 is exact
# in binary and keeps products like A*C - B^2 inside double range
_TRIG = 2.0**250
_SCALE = 2.0**256
_SCALE_LOG2 = 256

TABLE_FORMAT_VERSION = 1


@dataclass(frozen=True)
class RecurrenceTable:
    """Recurrence data for one weight.

    off_diag[k-1] holds b_k (k = 1..n_max); diag[k] holds a_k
    (k = 0..n_max-1), identically zero for even weights.  log_leading holds
    ln(gamma_k); the linear `leading` view underflows to zero where
    double precision cannot represent gamma_k.  ortho_residual is the
    largest Gram defect max |<p_i, p_j> - delta_ij| over
    i, j <= min(n_max, 256), measured on a mesh independent of the one that
    built the table.
    """

    label: str
    n_max: int
    off_diag: np.ndarray
    diag: np.ndarray
    log_leading: np.ndarray
    quad_nodes: np.ndarray
    quad_weights: np.ndarray
    ortho_residual: float
    pad: float
    mesh_signature: str

    @property
    def gamma0(self) -> float:
        return float(np.exp(self.log_leading[0]))

    @property
    def leading(self) -> np.ndarray:
        with np.errstate(under="ignore"):
            return np.exp(self.log_leading)

    def b(self, k: int) -> float:
        """b_k for k >= 1."""
        return float(self.off_diag[k - 1])


def _support_radius(spec: WeightSpec, n_max: int, pad: float) -> float:
    """pad * a_{2 n_max}, clipped where exp(-2Q) leaves extended-precision
    range (the clipped tail carries no representable mass)."""
    a2n = solve_mrs(spec, 2 * n_max, tol=1e-8).a_n
    r = pad * a2n
    if float(spec.q(np.float64(r))) <= 5500.0:
        return r
    lo, hi = 0.0, r
    while hi - lo > 1e-9 * r:
        mid = 0.5 * (lo + hi)
        if float(spec.q(np.float64(mid))) <= 5500.0:
            lo = mid
        else:
            hi = mid
    return lo


def _mesh(R: float, n_target: int, order: int, grade_ratio: float,
          grade_levels: int):
    """Composite Gauss-Legendre panels on [-R, R], geometrically graded
    toward 0 (where Q'' may blow up) and symmetric about the origin."""
    ld = np.longdouble
    xg, wg = gl_rule(order)
    xg = xg.astype(ld)
    wg = wg.astype(ld)
    n_uniform = max(8, -(-n_target // (2 * order)))
    edges = np.linspace(ld(0), ld(R), n_uniform + 1)
    first = edges[1]
    graded = [first * ld(grade_ratio) ** j for j in range(1, grade_levels)][::-1]
    edges = np.concatenate([[ld(0)], graded, edges[1:]])
    lo, hi = edges[:-1], edges[1:]
    mid = (lo + hi) / 2
    half = (hi - lo) / 2
    nodes = (mid[:, None] + half[:, None] * xg[None, :]).ravel()
    wts = (half[:, None] * wg[None, :]).ravel()
    return (np.concatenate([-nodes[::-1], nodes]),
            np.concatenate([wts[::-1], wts]))


def _stieltjes(nodes, w2w, n_max: int):
    """Lanczos form of the Stieltjes procedure on the discrete measure.
    Returns (b_1..b_n_max, gamma_0) in the dtype of the inputs."""
    m0 = np.sum(w2w)
    q = np.sqrt(w2w / m0)
    b = np.zeros(n_max + 1, dtype=nodes.dtype)
    q_prev = np.zeros_like(q)
    for k in range(1, n_max + 1):
        v = nodes * q - b[k - 1] * q_prev
        v -= (q @ v) * q  # even weight: diagonal term is zero, this removes drift
        bk = np.sqrt(v @ v)
        if not bk > 0:
            raise DiscretizationError(f"Stieltjes breakdown at step {k}")
        b[k] = bk
        q_prev = q
        q = v / bk
    return b[1:], 1.0 / np.sqrt(m0)


def _gram_residual(spec: WeightSpec, off_diag, gamma0: float, R: float,
                   n_max: int, n_target: int) -> float:
    """Largest Gram defect over i, j <= min(n_max, 256) on an independent
    mesh (different order, grading and panel count)."""
    n_check = min(n_max, 256)
    nodes, wts = _mesh(R, int(1.37 * n_target) | 1, order=31,
                       grade_ratio=0.4, grade_levels=24)
    x = nodes.astype(float)
    lw = wts.astype(float)
    # weighted values p_j(x) W(x) via mantissa/exponent recurrence
    m = x.size
    p_prev = np.zeros(m)
    p_cur = np.full(m, gamma0)
    expo = np.zeros(m)
    T = np.empty((n_check + 1, m))
    qx = np.asarray(spec.q(x), dtype=float)
    T[0] = p_cur
    for k in range(1, n_check + 1):
        bk = off_diag[k - 1]
        bkm = off_diag[k - 2] if k >= 2 else 0.0
        p_next = (x * p_cur - bkm * p_prev) / bk
        big = np.abs(p_next) > _TRIG
        if np.any(big):
            f = 1.0 / _SCALE
            p_next[big] *= f
            p_cur[big] *= f
            T[: k + 1, big] *= f
            expo[big] += _SCALE_LOG2
        T[k] = p_next
        p_prev, p_cur = p_cur, p_next
    scale = np.exp(expo * math.log(2.0) - qx)  # p_j W = mantissa * scale
    Tw = T * (scale * np.sqrt(np.maximum(lw, 0.0)))[None, :]
    G = Tw @ Tw.T
    return float(np.max(np.abs(G - np.eye(n_check + 1))))


def build_recurrence(spec: WeightSpec, n_max: int, pad: float = 1.5,
                     max_nodes: int = 200_000) -> RecurrenceTable:
    """Build the recurrence table by the discretized Stieltjes procedure.

    The measure exp(-2Q) dx is truncated to [-R, R] with
    R = pad * a_{2 n_max} (weighted polynomials of the degrees involved
    carry only exponentially small mass outside) and discretized on
    composite Gauss-Legendre panels.  The node count doubles until the
    coefficient table stabilizes; the result must pass the independent-mesh
    Gram audit at 1e-8.
    """
    if n_max < 1:
        raise DomainError(f"n_max must be >= 1, got {n_max}")
    if pad < 1.1:
        raise DomainError(f"pad must be >= 1.1, got {pad}")
    R = _support_radius(spec, n_max, pad)
    ld = np.longdouble

    n_target = max(1200, 16 * n_max)
    prev = None
    while n_target <= max_nodes:
        nodes, wts = _mesh(R, n_target, order=24, grade_ratio=0.5,
                           grade_levels=30)
        w2w = np.exp(ld(-2) * spec.q(nodes)) * wts
        off_ld, gamma0_ld = _stieltjes(nodes, w2w, n_max)
        if prev is not None and np.max(
                np.abs(off_ld / prev - 1)).astype(float) < 1e-13:
            break
        prev = off_ld
        n_target *= 2
    else:
        raise DiscretizationError(
            f"recurrence coefficients did not stabilize within {max_nodes} nodes")

    off = off_ld.astype(float)
    gamma0 = float(gamma0_ld)
    log_leading = np.concatenate([[math.log(gamma0)],
                                  math.log(gamma0) - np.cumsum(
                                      np.log(off_ld)).astype(float)])

    residual = _gram_residual(spec, off, gamma0, R, n_max, n_target)
    if residual > 1e-8:
        raise DiscretizationError(
            f"orthogonality residual {residual:.3e} exceeds 1e-8; "
            "discretization too coarse")

    build_w = wts.astype(float)  # rule weights; the measure is exp(-2Q) on the nodes
    sig = f"gl24x{n_target};r0.5x30;R={R:.12g}"
    return RecurrenceTable(
        label=spec.label, n_max=n_max, off_diag=off,
        diag=np.zeros(n_max), log_leading=log_leading,
        quad_nodes=nodes.astype(float), quad_weights=build_w,
        ortho_residual=residual, pad=pad, mesh_signature=sig)


_TABLE_CACHE: dict[tuple, RecurrenceTable] = {}


def get_table(spec: WeightSpec, n_max: int, pad: float = 1.5) -> RecurrenceTable:
    """Cached build_recurrence keyed by (label, n_max, pad).  A cached table
    with larger n_max serves smaller requests unchanged."""
    for (lbl, nm, pd), tab in _TABLE_CACHE.items():
        if lbl == spec.label and pd == pad and nm >= n_max:
            return tab
    tab = build_recurrence(spec, n_max, pad=pad)
    _TABLE_CACHE[(spec.label, n_max, pad)] = tab
    return tab


def save_table(table: RecurrenceTable, path) -> None:
    np.savez_compressed(
        path, format_version=TABLE_FORMAT_VERSION, label=table.label,
        n_max=table.n_max, off_diag=table.off_diag, diag=table.diag,
        log_leading=table.log_leading, quad_nodes=table.quad_nodes,
        quad_weights=table.quad_weights, ortho_residual=table.ortho_residual,
        pad=table.pad, mesh_signature=table.mesh_signature)


def load_table(path) -> RecurrenceTable:
    with np.load(path, allow_pickle=False) as z:
        if int(z["format_version"]) != TABLE_FORMAT_VERSION:
            raise DomainError(
                f"table file format {int(z['format_version'])} unsupported")
        return RecurrenceTable(
            label=str(z["label"]), n_max=int(z["n_max"]),
            off_diag=z["off_diag"], diag=z["diag"],
            log_leading=z["log_leading"], quad_nodes=z["quad_nodes"],
            quad_weights=z["quad_weights"],
            ortho_residual=float(z["ortho_residual"]), pad=float(z["pad"]),
            mesh_signature=str(z["mesh_signature"]))


# ---------------------------------------------------------------------------
# evaluation under a shared power-of-two exponent


@dataclass(frozen=True)
class PolyValues:
    """p_0..p_n and derivatives at one point, as mantissa * 2^exponent."""

    values: np.ndarray
    derivs: np.ndarray
    exponent: int


def eval_poly(table: RecurrenceTable, x: float, n: int) -> PolyValues:
    """Evaluate p_0..p_n and p_0'..p_n' at x.

    All returned mantissas share one power-of-two exponent; whenever the
    running magnitude passes 2^250 every accumulated value is rescaled, so
    no overflow occurs however far outside the support x lies.  Mantissas of
    low degrees may underflow to zero after a rescale; their true values are
    negligible relative to the dominant degree at such x.
    """
    if n > table.n_max:
        raise DomainError(f"degree {n} exceeds table n_max {table.n_max}")
    if n < 0:
        raise DomainError("degree must be >= 0")
    vals = np.zeros(n + 1)
    ders = np.zeros(n + 1)
    vals[0] = table.gamma0
    expo = 0
    p_prev = d_prev = 0.0
    p_cur, d_cur = table.gamma0, 0.0
    for k in range(1, n + 1):
        bk = table.off_diag[k - 1]
        bkm = table.off_diag[k - 2] if k >= 2 else 0.0
        p_next = (x * p_cur - bkm * p_prev) / bk
        d_next = (x * d_cur + p_cur - bkm * d_prev) / bk
        if abs(p_next) > _TRIG or abs(d_next) > _TRIG:
            f = 1.0 / _SCALE
            p_next *= f
            d_next *= f
            p_cur *= f
            d_cur *= f
            vals[:k] *= f
            ders[:k] *= f
            expo += _SCALE_LOG2
        vals[k] = p_next
        ders[k] = d_next
        p_prev, p_cur = p_cur, p_next
        d_prev, d_cur = d_cur, d_next
    return PolyValues(values=vals, derivs=ders, exponent=expo)


@dataclass(frozen=True)
class KernelTriple:
    """Diagonal kernel sums A = sum p_j^2, B = sum p_j p_j', C = sum p_j'^2
    as mantissas under a shared scale 2^exponent."""

    a_val: float
    b_val: float
    c_val: float
    exponent: int


def kernel_triple_many(table: RecurrenceTable, x, n: int,
                       force_rescale_at: int | None = None):
    """A, B, C mantissas and per-point exponents at an array of points.

    `force_rescale_at` injects one extra renormalization after that degree;
    the mantissa/exponent pairs change but every derived ratio is invariant
    bit for bit, which the audit tests exercise.
    """
    if n > table.n_max:
        raise DomainError(f"degree {n} exceeds table n_max {table.n_max}")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    m = x.size
    gamma0 = table.gamma0
    p_prev = np.zeros(m)
    d_prev = np.zeros(m)
    p_cur = np.full(m, gamma0)
    d_cur = np.zeros(m)
    A = np.full(m, gamma0 * gamma0)
    B = np.zeros(m)
    C = np.zeros(m)
    expo = np.zeros(m, dtype=np.int64)
    off = table.off_diag
    for k in range(1, n + 1):
        bk = off[k - 1]
        bkm = off[k - 2] if k >= 2 else 0.0
        p_next = (x * p_cur - bkm * p_prev) / bk
        d_next = (x * d_cur + p_cur - bkm * d_prev) / bk
        big = (np.abs(p_next) > _TRIG) | (np.abs(d_next) > _TRIG)
        if force_rescale_at is not None and k == force_rescale_at:
            big = np.ones(m, dtype=bool)
        if np.any(big):
            f = 1.0 / _SCALE
            p_next[big] *= f
            d_next[big] *= f
            p_cur[big] *= f
            d_cur[big] *= f
            ff = f * f
            A[big] *= ff
            B[big] *= ff
            C[big] *= ff
            expo[big] += _SCALE_LOG2
        A += p_next * p_next
        B += p_next * d_next
        C += d_next * d_next
        p_prev, p_cur = p_cur, p_next
        d_prev, d_cur = d_cur, d_next
    return A, B, C, 2 * expo


def kernel_triple(table: RecurrenceTable, x: float, n: int) -> KernelTriple:
    """K_{n+1}, K^{(0,1)}_{n+1}, K^{(1,1)}_{n+1} on the diagonal at x."""
    A, B, C, e2 = kernel_triple_many(table, [x], n)
    return KernelTriple(a_val=float(A[0]), b_val=float(B[0]),
                        c_val=float(C[0]), exponent=int(e2[0]))


def universality_ratios(spec: WeightSpec, table: RecurrenceTable,
                        info: ScalingInfo, x: float,
                        eps: float = 0.05) -> tuple[float, float, float]:
    """Convergence diagnostics of the weighted kernel against the
    equilibrium density, at x inside the eps-shrunk support window for
    degree n + 1 = info.n:

        r00 = W^2 K / sigma            -> 1
        r01 = W^2 K^(0,1)/sigma^2 - Q'/sigma   -> 0
        r11 = W^2 K^(1,1)/sigma^3 - (Q'/sigma)^2 -> pi^2/3
    """
    n = info.n - 1
    lo, hi = info.j_interval(eps)
    if not lo <= x <= hi:
        raise DomainError(
            f"x = {x} outside the eps-window [{lo:.6g}, {hi:.6g}]")
    A, Bv, Cv, e2 = kernel_triple_many(table, [x], n)
    sigma = equilibrium_density_many(spec, info, [x])[0]
    log_w2 = -2.0 * float(spec.q(np.float64(x)))
    scale = math.exp(log_w2 + float(e2[0]) * math.log(2.0))
    qp = float(spec.q1(np.float64(x)))
    r00 = float(A[0]) * scale / sigma
    r01 = float(Bv[0]) * scale / sigma**2 - qp / sigma
    r11 = float(Cv[0]) * scale / sigma**3 - (qp / sigma) ** 2
    return r00, r01, r11
