"""Quantum geometric tensor, witness-filtered variant, and inequality bounds.

For a two-band Hamiltonian the valence-band quantum geometric tensor over a
pair of reciprocal coordinates has the closed forms

    g_ab  = (1/4) da(n) . db(n)                     (Fubini-Study metric)
    F_xy  = -(1/2) n . (dx(n) x dy(n))              (curvature two-form)
    Q_ab  = g_ab + (i/2) F_ab

with n the unit Bloch vector; the curvature sign is fixed so the Riemann sum
of F_xy over the torus reproduces the lattice (link-variable) Chern number.
The witness-filtered tensor inserts the compressed single-excitation sign
operator S' = -(cos(theta) sx + sin(theta) sy) between projected state
derivatives,

    QS_ab = <da(u)| Pperp S' Pperp |db(u)>,   Pperp = 1 - |u><u|,

and is computed both this way (through an explicit smooth local section) and
via the pointwise proportionality QS = eta * Q with
eta = 2 Re(exp(i*theta) vA conj(vB)); the two paths agree to rounding and the
deviation is reported.  The quantum Fisher information along a direction is
FQ = 4 g_dd, its filtered version FQS = 4 Re(QS_dd) = eta * FQ, and the whole
family obeys the concurrence-weighted bounds checked by ``inequality_suite``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError, ViolationFound
from .mesh import CurvatureField, TorusMesh, build_mesh, chern_number, plaquette_curvature
from .model import (
    CELL_AREA,
    RECIPROCAL,
    BlochState,
    ModelParams,
    bloch_vector_fields,
    valence_state,
    d_vector,
)
from .multiorbital import witness_block
from .witness import sector_responses

#: Additive slack allowed when checking the analytic inequalities.
BOUND_SLACK = 1e-12

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class QgtSample:
    """Quantum-geometric data at one (k, theta, direction)."""

    g: np.ndarray            # (2, 2) real Fubini-Study metric
    Fxy: float               # curvature two-form component
    eta: float               # witness expectation on the conduction state
    QS: np.ndarray           # (2, 2) complex filtered tensor (insertion form)
    C: float                 # concurrence
    FQ: float                # Fisher information along the direction
    FQS: float               # filtered Fisher information along the direction
    dual_path_deviation: float  # max |insertion - eta * Q| over entries
    theta: float = 0.0
    direction: tuple[float, float] = (1.0, 0.0)


@dataclass(frozen=True)
class GeometrySamples:
    """Vectorized geometry fields over a batch of k-points."""

    k: np.ndarray            # (P, 2)
    nz: np.ndarray           # (P,)
    coherence: np.ndarray    # (P,) complex
    dcoherence: np.ndarray   # (P, 2) complex, d(vA vB*)/dk_a
    g: np.ndarray            # (P, 2, 2)
    Fxy: np.ndarray          # (P,)
    eta: np.ndarray          # (P,)
    C: np.ndarray            # (P,)
    QS: np.ndarray           # (P, 2, 2) complex, insertion form
    dual_dev: np.ndarray     # (P,)
    FQ: np.ndarray           # (P,)
    FQS: np.ndarray          # (P,)
    direction: np.ndarray    # (P, 2)
    theta: np.ndarray        # (P,)

    @property
    def im_qs_xy(self) -> np.ndarray:
        return self.QS[:, 0, 1].imag


def _valence_sections(n: np.ndarray, dn: np.ndarray):
    """Smooth local valence sections u and derivatives du over flat batches.

    Southern hemisphere (nz <= 0) uses the section regular away from the north
    pole, u = (a, -w/(2a)) with a = sqrt((1-nz)/2); the northern one uses
    u = (conj(w)/(2b), -b) with b = sqrt((1+nz)/2).  Both are exact eigenstates
    of n.sigma with eigenvalue -1 and never divide by a small quantity on
    their own half of the sphere.  Returns u (P, 2) and du (P, 2, 2) indexed
    [point, direction, component].
    """
    nz = n[:, 2]
    w = n[:, 0] + 1j * n[:, 1]
    dw = dn[:, :, 0] + 1j * dn[:, :, 1]       # (P, 2)
    dnz = dn[:, :, 2]
    u = np.empty((n.shape[0], 2), dtype=complex)
    du = np.empty((n.shape[0], 2, 2), dtype=complex)

    s = nz <= 0.0
    a = np.sqrt(0.5 * (1.0 - nz[s]))
    da = -dnz[s] / (4.0 * a[:, None])
    u[s, 0] = a
    u[s, 1] = -w[s] / (2.0 * a)
    du[s, :, 0] = da
    du[s, :, 1] = -dw[s] / (2.0 * a[:, None]) + w[s, None] * da / (2.0 * (a**2)[:, None])

    m = ~s
    b = np.sqrt(0.5 * (1.0 + nz[m]))
    db = dnz[m] / (4.0 * b[:, None])
    u[m, 0] = np.conj(w[m]) / (2.0 * b)
    u[m, 1] = -b
    du[m, :, 0] = np.conj(dw[m]) / (2.0 * b[:, None]) - np.conj(w[m])[:, None] * db / (
        2.0 * (b**2)[:, None]
    )
    du[m, :, 1] = -db
    return u, du


def sign_operator_matrix(theta) -> np.ndarray:
    """Compressed witness on the two-level Bloch space:
    S' = -(cos(theta) sx + sin(theta) sy) = [[0, -e^{-i t}], [-e^{i t}, 0]].
    Accepts a scalar or a batch of phases; returns (..., 2, 2)."""
    th = np.asarray(theta, dtype=float)
    phase = np.exp(1j * th)
    out = np.zeros(th.shape + (2, 2), dtype=complex)
    out[..., 0, 1] = -np.conj(phase)
    out[..., 1, 0] = -phase
    return out


def qgt_sample_arrays(k, p: ModelParams, theta, direction=None) -> GeometrySamples:
    """All geometry fields for a batch of k-points (the vector engine).

    ``theta`` is a scalar or per-point array; ``direction`` is a per-point
    (P, 2) array, a single 2-vector, or None for the x direction.
    """
    k = np.atleast_2d(np.asarray(k, dtype=float))
    npts = k.shape[0]
    n, dn, _ = bloch_vector_fields(k, p)

    nz = n[:, 2]
    coherence = 0.5 * (-n[:, 0] + 1j * n[:, 1])
    dcoherence = 0.5 * (-dn[:, :, 0] + 1j * dn[:, :, 1])
    g = 0.25 * np.einsum("pac,pbc->pab", dn, dn)
    fxy = -0.5 * np.einsum("pc,pc->p", n, np.cross(dn[:, 0, :], dn[:, 1, :]))

    th = np.broadcast_to(np.asarray(theta, dtype=float), (npts,)).copy()
    phase = np.exp(1j * th)
    eta = 2.0 * np.real(phase * coherence)
    conc = np.sqrt(np.clip(1.0 - nz * nz, 0.0, None))

    u, du = _valence_sections(n, dn)
    perp = np.eye(2)[None] - u[:, :, None] * np.conj(u[:, None, :])
    inserted = perp @ sign_operator_matrix(th) @ perp
    qs = np.einsum("pai,pij,pbj->pab", np.conj(du), inserted, du)

    fmat = np.zeros((npts, 2, 2))
    fmat[:, 0, 1] = fxy
    fmat[:, 1, 0] = -fxy
    q_closed = g + 0.5j * fmat
    dual = np.abs(qs - eta[:, None, None] * q_closed).reshape(npts, -1).max(axis=1)

    if direction is None:
        dirs = np.broadcast_to(np.array([1.0, 0.0]), (npts, 2)).copy()
    else:
        dirs = np.broadcast_to(np.asarray(direction, dtype=float), (npts, 2)).copy()
    fq = 4.0 * np.einsum("pa,pab,pb->p", dirs, g, dirs)
    fqs = 4.0 * np.real(np.einsum("pa,pab,pb->p", dirs.astype(complex), qs, dirs.astype(complex)))

    return GeometrySamples(
        k=k, nz=nz, coherence=coherence, dcoherence=dcoherence, g=g, Fxy=fxy,
        eta=eta, C=conc, QS=qs, dual_dev=dual, FQ=fq, FQS=fqs,
        direction=dirs, theta=th,
    )


# ---------------------------------------------------------------------------
# Scalar operations.
# ---------------------------------------------------------------------------

def qgt(k, p: ModelParams) -> tuple[np.ndarray, float]:
    """Fubini-Study metric g (2x2) and curvature component F_xy at one k."""
    n, dn, _ = bloch_vector_fields(np.atleast_2d(np.asarray(k, dtype=float)), p)
    g = 0.25 * np.einsum("pac,pbc->pab", dn, dn)[0]
    fxy = float(-0.5 * (n[0] @ np.cross(dn[0, 0], dn[0, 1])))
    return g, fxy


def qfi(g, direction) -> float:
    """Fisher information 4 * d^T g d of the (not re-normalized) direction."""
    d = np.asarray(direction, dtype=float)
    return float(4.0 * d @ np.asarray(g, dtype=float) @ d)


def eta_value(s: BlochState, theta: float) -> float:
    """Witness expectation on the conduction state, 2 Re(exp(i*theta) vA vB*).

    Equals 2*alpha - 1 from the sector weights and -<u_minus|S'|u_minus> by a
    direct matrix sandwich.
    """
    return float(2.0 * (np.exp(1j * theta) * s.coherence).real)


def concurrence(s: BlochState) -> float:
    """Concurrence 2 |vA vB| of the single-excitation state; also sqrt(1-nz^2)."""
    return float(2.0 * abs(s.vA * s.vB))


def coherence_gradient(k, p: ModelParams) -> np.ndarray:
    """Exact k-gradient of vA vB* = (-nx + i ny)/2; shape (2,) complex."""
    _, dn, _ = bloch_vector_fields(np.atleast_2d(np.asarray(k, dtype=float)), p)
    return 0.5 * (-dn[0, :, 0] + 1j * dn[0, :, 1])


def filtered_qgt(k, p: ModelParams, theta: float, direction=(1.0, 0.0)) -> QgtSample:
    """Filtered QGT at one k, via the insertion form, with the eta-product
    cross-check recorded in ``dual_path_deviation``."""
    arr = qgt_sample_arrays(np.atleast_2d(np.asarray(k, dtype=float)), p, theta, direction)
    return QgtSample(
        g=arr.g[0],
        Fxy=float(arr.Fxy[0]),
        eta=float(arr.eta[0]),
        QS=arr.QS[0],
        C=float(arr.C[0]),
        FQ=float(arr.FQ[0]),
        FQS=float(arr.FQS[0]),
        dual_path_deviation=float(arr.dual_dev[0]),
        theta=float(arr.theta[0]),
        direction=(float(arr.direction[0, 0]), float(arr.direction[0, 1])),
    )


def filtered_chern_from_qgt(p: ModelParams, theta: float, N) -> float:
    """Riemann-sum estimate -(1/pi) * sum Im(QS_xy) * dA of the graded response.

    Uses the insertion-form filtered tensor at the N x N plaquette base
    corners with cell area |g1 x g2| / N^2.
    """
    nx, ny = (int(N[0]), int(N[1])) if isinstance(N, (tuple, list)) else (int(N), int(N))
    frac = np.stack(
        np.meshgrid(np.arange(nx) / nx, np.arange(ny) / ny, indexing="ij"), axis=-1
    )
    k = (frac @ RECIPROCAL).reshape(-1, 2)
    arr = qgt_sample_arrays(k, p, theta)
    cell = CELL_AREA / (nx * ny)
    return float(-(arr.im_qs_xy * cell).sum() / math.pi)


def curvature_riemann_total(p: ModelParams, N) -> float:
    """Riemann sum (1/2pi) * sum F_xy * dA of the closed-form curvature.

    Unlike the link-variable lattice total (exactly integer by construction),
    this converges to the Chern number only in the N -> infinity limit; the
    integrand is smooth and periodic, so convergence is spectral.
    """
    nx, ny = (int(N[0]), int(N[1])) if isinstance(N, (tuple, list)) else (int(N), int(N))
    frac = np.stack(
        np.meshgrid(np.arange(nx) / nx, np.arange(ny) / ny, indexing="ij"), axis=-1
    )
    k = (frac @ RECIPROCAL).reshape(-1, 2)
    arr = qgt_sample_arrays(k, p, 0.0)
    cell = CELL_AREA / (nx * ny)
    return float((arr.Fxy * cell).sum() / TWO_PI)


def saturation_case(p: ModelParams | None = None, k=(0.0, 1.0)) -> QgtSample:
    """A (k, theta) pair that saturates |FQS| = FQ.

    At an equator point (nz = 0, concurrence 1) the phase theta aligned with
    -arg(vA vB*) gives eta = 1, so the filtered Fisher information equals the
    unfiltered one.  The default k sits on the equator for the default model
    (t1 = 1, t2 = 1/3, phi = pi/2, M = 0).
    """
    if p is None:
        p = ModelParams(t1=1.0, t2=1.0 / 3.0, phi=math.pi / 2.0, M=0.0)
    state = valence_state(d_vector(np.asarray(k, dtype=float), p))
    if abs(state.nz) > 1e-9:
        raise ValidationError(
            f"saturation point must sit on the equator; nz = {state.nz!r} at k = {k}"
        )
    theta = float(-np.angle(state.coherence))
    return filtered_qgt(np.asarray(k, dtype=float), p, theta)


# ---------------------------------------------------------------------------
# Inequality suites.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InequalityReport:
    """Outcome of a sampled bound check: max slack (lhs - rhs) per bound."""

    samples: int
    seed: int
    theta: float
    mesh_size: tuple[int, int]
    max_slack: dict
    nu_S: float
    nu_S_bound: float
    violations: int

    def to_dict(self) -> dict:
        return {
            "samples": self.samples,
            "seed": self.seed,
            "theta": self.theta,
            "mesh": {"nx": self.mesh_size[0], "ny": self.mesh_size[1]},
            "max_slack": dict(self.max_slack),
            "nu_S": self.nu_S,
            "nu_S_bound": self.nu_S_bound,
            "violations": self.violations,
        }


def _collect_violations(checks, slack: float):
    """checks: name -> (lhs array, rhs array). Returns (max_slack, offenders)."""
    max_slack = {}
    offenders = []
    for name, (lhs, rhs) in checks.items():
        gap = lhs - rhs
        max_slack[name] = float(gap.max())
        bad = np.nonzero(gap > slack)[0]
        for i in bad[:3]:
            offenders.append((name, int(i), float(lhs[i]), float(rhs[i])))
    return max_slack, offenders


def inequality_suite(
    p: ModelParams,
    theta: float,
    N,
    samples: int,
    seed: int,
    slack: float = BOUND_SLACK,
) -> InequalityReport:
    """Sampled verification of the filtered-geometry bound family.

    Draws ``samples`` k-points uniformly over the Brillouin torus and a random
    probe direction per point from a counter-based (Philox) stream, then checks

        |FQS| <= C * FQ <= FQ        |eta| <= C
        |Im QS_xy| <= (C/2) |F_xy|   |d_dir (vA vB*)| <= (1/2) sqrt(FQ)

    pointwise and the global  |nu_S| <= (1/2pi) sqrt(sum|F|) sqrt(sum C^2 |F|)
    on an N x N mesh.  Returns the per-bound max slack; raises ViolationFound
    (carrying the report) if any bound fails by more than ``slack`` --- that
    signals an implementation bug, never an expected outcome.
    """
    nx, ny = (int(N[0]), int(N[1])) if isinstance(N, (tuple, list)) else (int(N), int(N))
    rng = np.random.Generator(np.random.Philox(seed))
    uv = rng.random((int(samples), 2))
    psi = rng.random(int(samples)) * TWO_PI
    k = uv @ RECIPROCAL
    dirs = np.stack([np.cos(psi), np.sin(psi)], axis=-1)
    arr = qgt_sample_arrays(k, p, theta, dirs)

    dcoh_dir = np.abs(np.einsum("pa,pa->p", arr.dcoherence, dirs.astype(complex)))
    checks = {
        "abs_fqs_le_c_fq": (np.abs(arr.FQS), arr.C * arr.FQ),
        "c_fq_le_fq": (arr.C * arr.FQ, arr.FQ),
        "abs_eta_le_c": (np.abs(arr.eta), arr.C),
        "im_qs_le_half_c_f": (np.abs(arr.im_qs_xy), 0.5 * arr.C * np.abs(arr.Fxy)),
        "dcoh_le_half_sqrt_fq": (dcoh_dir, 0.5 * np.sqrt(arr.FQ)),
    }

    mesh = build_mesh(p, nx, ny)
    field = plaquette_curvature(mesh)
    report_s = sector_responses(mesh, field, theta)
    absf = np.abs(field.F)
    c_mesh_sq = np.clip(1.0 - mesh.nz * mesh.nz, 0.0, None)
    bound = math.sqrt(absf.sum()) * math.sqrt((c_mesh_sq * absf).sum()) / TWO_PI
    checks["global_nu_s"] = (
        np.array([abs(report_s.nu_S)]),
        np.array([bound]),
    )

    max_slack, offenders = _collect_violations(checks, slack)
    report = InequalityReport(
        samples=int(samples),
        seed=int(seed),
        theta=float(theta),
        mesh_size=(nx, ny),
        max_slack=max_slack,
        nu_S=report_s.nu_S,
        nu_S_bound=float(bound),
        violations=len(offenders),
    )
    if offenders:
        name, i, lhs, rhs = offenders[0]
        err = ViolationFound(
            f"{len(offenders)} bound violation(s); first: {name} at sample {i}: "
            f"lhs = {lhs!r} > rhs = {rhs!r} (k = {arr.k[i % len(arr.k)]}, "
            f"theta = {float(np.atleast_1d(arr.theta)[i % len(arr.theta)])})"
        )
        err.report = report
        raise err
    return report


@dataclass(frozen=True)
class MultiOrbitalBoundsReport:
    """Outcome of the operator-norm bound checks for a product embedding."""

    samples: int
    seed: int
    theta: float
    y_operator_norm: float
    max_slack: dict
    nu: float
    nu_bound: float
    violations: int

    def to_dict(self) -> dict:
        return {
            "samples": self.samples,
            "seed": self.seed,
            "theta": self.theta,
            "y_operator_norm": self.y_operator_norm,
            "max_slack": dict(self.max_slack),
            "nu": self.nu,
            "nu_bound": self.nu_bound,
            "violations": self.violations,
        }


def multiorbital_bounds(
    mesh: TorusMesh,
    F: CurvatureField,
    x,
    y,
    theta: float,
    samples: int,
    seed: int,
    slack: float = BOUND_SLACK,
) -> MultiOrbitalBoundsReport:
    """Operator-norm bounds for the rank-one witness on a product embedding.

    At mesh points sampled with a Philox stream, checks

        |<S'>|      <= 2 ||Y|| ||a|| ||b||
        |Im QS_xy|  <=   ||Y|| ||a|| ||b|| |F_xy|
        |FQS|       <= 4 g_dd            (||Pperp S' Pperp|| <= 1)

    with a = vA x, b = vB y, Y = exp(-i*theta) x y^dagger, plus the lattice
    bound |nu| <= ||Y|| (1/2pi) sum C |F|.  Raises ViolationFound on failure.
    """
    if mesh.params is None:
        raise ValidationError("mesh.params required (mesh not built from ModelParams)")
    from .multiorbital import _require_unit, coherence_matrix, sector_response_multi

    xv = _require_unit(x, "x")
    yv = _require_unit(y, "y")
    block = witness_block(xv, yv, theta)
    y_norm = float(np.linalg.norm(block, 2))

    rng = np.random.Generator(np.random.Philox(seed))
    flat = rng.integers(0, mesh.nx * mesh.ny, size=int(samples))
    psi = rng.random(int(samples)) * TWO_PI
    dirs = np.stack([np.cos(psi), np.sin(psi)], axis=-1)
    kpts = mesh.kpoints.reshape(-1, 2)[flat]
    arr = qgt_sample_arrays(kpts, mesh.params, theta, dirs)

    va = mesh.vA.reshape(-1)[flat]
    vb = mesh.vB.reshape(-1)[flat]
    a_amp = va[:, None] * xv          # (S, m)
    b_amp = vb[:, None] * yv          # (S, n)
    expectation = -2.0 * np.real(
        np.einsum("si,ij,sj->s", np.conj(a_amp), block, b_amp)
    )
    ab = np.abs(va) * np.abs(vb)

    g_dd = np.einsum("pa,pab,pb->p", dirs, arr.g, dirs)
    checks = {
        "witness_expectation": (np.abs(expectation), 2.0 * y_norm * ab),
        "im_qs": (np.abs(arr.im_qs_xy), y_norm * ab * np.abs(arr.Fxy)),
        "fqs_le_4g": (np.abs(arr.FQS), 4.0 * g_dd),
    }

    mu = chern_number(F)
    jf = coherence_matrix(mesh, F, xv, yv)
    _, nu = sector_response_multi(jf, mu, xv, yv, theta)
    c_mesh = np.sqrt(np.clip(1.0 - mesh.nz * mesh.nz, 0.0, None))
    nu_bound = float(y_norm * (c_mesh * np.abs(F.F)).sum() / TWO_PI)
    checks["global_nu"] = (np.array([abs(nu)]), np.array([nu_bound]))

    max_slack, offenders = _collect_violations(checks, slack)
    report = MultiOrbitalBoundsReport(
        samples=int(samples),
        seed=int(seed),
        theta=float(theta),
        y_operator_norm=y_norm,
        max_slack=max_slack,
        nu=float(nu),
        nu_bound=nu_bound,
        violations=len(offenders),
    )
    if offenders:
        name, i, lhs, rhs = offenders[0]
        err = ViolationFound(
            f"{len(offenders)} bound violation(s); first: {name} at sample {i}: "
            f"lhs = {lhs!r} > rhs = {rhs!r}"
        )
        err.report = report
        raise err
    return report
