#!/usr/bin/env python3
"""Independent reference oracle for the test suite.

Recomputes every nontrivial expected value through a deliberately different
route than the library under test, then prints them for freezing into tests:

  * valence states come from numpy.linalg.eigh (no closed-form spinors, no
    hemisphere branches, no pole conventions) -- every quantity used here is
    gauge invariant, so the arbitrary eigh phase drops out;
  * quantum-geometry tensors come from central finite differences of the
    band projector P(k), using the trace identities
        Q_ab  = tr(P dP_a dP_b)          (metric + curvature)
        QS_ab = tr(S' dP_b P dP_a)       (witness insertion)
    rather than derivatives of an explicit section.

Run:  python3 tests/oracles/oracle_reference.py
This script must not import the package under test.
"""
import time

import numpy as np

SQ3 = np.sqrt(3.0)
NN = np.array([[0.0, 1.0], [-SQ3 / 2, -0.5], [SQ3 / 2, -0.5]])
NNN = np.array([[-SQ3, 0.0], [SQ3 / 2, 1.5], [SQ3 / 2, -1.5]])
G = np.array([[2 * np.pi / SQ3, -2 * np.pi / 3], [0.0, 4 * np.pi / 3]])
CELL_AREA = 8 * np.pi**2 / (3 * SQ3)
K_PLUS = np.array([4 * np.pi / (3 * SQ3), 0.0])
TWO_PI = 2 * np.pi


def hamiltonian(k, t1, t2, phi, M):
    """h(k) = d0 I + d . sigma for batched k of shape (..., 2)."""
    k = np.asarray(k, dtype=float)
    nn = k @ NN.T
    nnn = k @ NNN.T
    f = t1 * np.exp(1j * nn).sum(axis=-1)          # dx + i dy
    d0 = 2 * t2 * np.cos(phi) * np.cos(nnn).sum(axis=-1)
    dz = M - 2 * t2 * np.sin(phi) * np.sin(nnn).sum(axis=-1)
    h = np.zeros(k.shape[:-1] + (2, 2), dtype=complex)
    h[..., 0, 0] = d0 + dz
    h[..., 1, 1] = d0 - dz
    h[..., 0, 1] = np.conj(f)
    h[..., 1, 0] = f
    return h


def valence(k, t1, t2, phi, M):
    """Lowest-band eigenvector at each k (arbitrary eigh gauge)."""
    _, vecs = np.linalg.eigh(hamiltonian(k, t1, t2, phi, M))
    return vecs[..., :, 0]


def mesh_k(nx, ny):
    fr = np.stack(
        np.meshgrid(np.arange(nx) / nx, np.arange(ny) / ny, indexing="ij"), axis=-1
    )
    return fr @ G


def fhs_curvature(t1, t2, phi, M, nx, ny):
    """Per-plaquette field strength from normalized link variables."""
    u = valence(mesh_k(nx, ny), t1, t2, phi, M)

    def link(a, b):
        ov = np.einsum("ijc,ijc->ij", np.conj(a), b)
        return ov / np.abs(ov)

    ux = link(u, np.roll(u, -1, axis=0))
    uy = link(u, np.roll(u, -1, axis=1))
    prod = ux * np.roll(uy, -1, axis=0) * np.conj(np.roll(ux, -1, axis=1)) * np.conj(uy)
    return np.angle(prod)


def fhs_chern(t1, t2, phi, M, nx, ny):
    total = fhs_curvature(t1, t2, phi, M, nx, ny).sum() / TWO_PI
    assert abs(total - round(total)) < 1e-9, total
    return int(round(total))


def sign_formula(t1, t2, phi, M):
    mk = M - 3 * SQ3 * t2 * np.sin(phi)
    mkp = M + 3 * SQ3 * t2 * np.sin(phi)
    assert mk != 0.0 and mkp != 0.0
    return int((np.sign(mk) - np.sign(mkp)) / 2)


def coherence_field(t1, t2, phi, M, nx, ny):
    """vA vB* over the mesh (gauge invariant)."""
    u = valence(mesh_k(nx, ny), t1, t2, phi, M)
    return u[..., 0] * np.conj(u[..., 1])


def sector(t1, t2, phi, M, nx, ny, theta):
    F = fhs_curvature(t1, t2, phi, M, nx, ny)
    c = coherence_field(t1, t2, phi, M, nx, ny)
    alpha = 0.5 + np.real(np.exp(1j * theta) * c)
    mu = int(round(F.sum() / TWO_PI))
    nu_minus = (alpha * F).sum() / TWO_PI
    nu_plus = ((1 - alpha) * F).sum() / TWO_PI
    nu_s = ((1 - 2 * alpha) * F).sum() / TWO_PI
    jf = (F * c).sum() / TWO_PI
    return mu, nu_minus, nu_plus, nu_s, jf


def ref_phase(t1, t2, phi, M, nx, ny):
    c = coherence_field(t1, t2, phi, M, nx, ny)
    z = np.conj(c).mean()
    return z, float(np.angle(z))


# --- finite-difference quantum geometry -----------------------------------

def projector(k, t1, t2, phi, M):
    u = valence(np.asarray(k, dtype=float), t1, t2, phi, M)
    return np.outer(u, np.conj(u))


def qgt_fd(k, t1, t2, phi, M, h=1e-5):
    """(g 2x2, Fxy) from central differences of the projector."""
    k = np.asarray(k, dtype=float)
    P = projector(k, t1, t2, phi, M)
    dP = []
    for a in range(2):
        e = np.zeros(2)
        e[a] = h
        dP.append((projector(k + e, t1, t2, phi, M) - projector(k - e, t1, t2, phi, M)) / (2 * h))
    q = np.array([[np.trace(P @ dP[a] @ dP[b]) for b in range(2)] for a in range(2)])
    g = q.real
    fxy = 2.0 * q[0, 1].imag
    return g, fxy, P, dP


def filtered_qgt_fd(k, t1, t2, phi, M, theta, h=1e-5):
    """(QS 2x2, eta) via the insertion trace QS_ab = tr(S' dP_b P dP_a)."""
    g, fxy, P, dP = qgt_fd(k, t1, t2, phi, M, h)
    sp = np.array([[0, -np.exp(-1j * theta)], [-np.exp(1j * theta), 0]])
    qs = np.array([[np.trace(sp @ dP[b] @ P @ dP[a]) for b in range(2)] for a in range(2)])
    u = valence(np.asarray(k, dtype=float), t1, t2, phi, M)
    c = u[0] * np.conj(u[1])
    eta = 2 * np.real(np.exp(1j * theta) * c)
    return g, fxy, qs, eta, c


def main():
    t1, t2, phi = 1.0, 1.0 / 3.0, np.pi / 2
    print("== calibration ==")
    print("sum exp(i K.delta) =", np.exp(1j * K_PLUS @ NN.T).sum())
    print("sum sin(K.b) =", np.sin(K_PLUS @ NNN.T).sum(), " expect", 3 * SQ3 / 2)
    print("cell area =", repr(CELL_AREA))

    print("\n== 7x7 phase grid (M x phi), FHS 24x24 vs sign formula ==")
    t0 = time.time()
    M_vals = np.linspace(-3, 3, 7)
    phi_vals = [np.pi / 2, -np.pi / 2, np.pi / 4, -np.pi / 4, 0.3, -0.3, 0.0]
    rows = []
    skipped = []
    for Mv in M_vals:
        row = []
        for ph in phi_vals:
            wall = 3 * SQ3 * t2 * np.sin(ph)
            if abs(Mv - wall) < 1e-9 or abs(Mv + wall) < 1e-9:
                skipped.append((float(Mv), float(ph)))
                row.append(None)
                continue
            lat = fhs_chern(t1, t2, ph, Mv, 24, 24)
            ana = sign_formula(t1, t2, ph, Mv)
            assert lat == ana, (Mv, ph, lat, ana)
            row.append(lat)
        rows.append(row)
    print("phi order:", [round(p, 6) for p in phi_vals])
    for Mv, row in zip(M_vals, rows):
        print(f"M={Mv:+.2f}:", row)
    print("on-wall skipped:", skipped)
    print("grid time:", round(time.time() - t0, 2), "s")

    print("\n== default sweep (M=-3..3, 25 pts, 48x48, auto theta) ==")
    mus = []
    worst_r = 0.0
    for Mv in np.linspace(-3, 3, 25):
        _, th = ref_phase(t1, t2, phi, Mv, 48, 48)
        mu, nm, npl, ns, jf = sector(t1, t2, phi, Mv, 48, 48, th)
        mus.append(mu)
        worst_r = max(worst_r, abs(mu - (npl + nm)), abs(ns - (npl - nm)))
    print("mu sequence:", mus)
    jumps = [
        (float(np.linspace(-3, 3, 25)[i]), float(np.linspace(-3, 3, 25)[i + 1]))
        for i in range(24)
        if mus[i + 1] != mus[i]
    ]
    print("jump brackets:", jumps, " total delta:", mus[-1] - mus[0])
    print("max residual over sweep:", worst_r)

    print("\n== reference phase (48x48) ==")
    for Mv in (0.0, 0.5):
        z, th = ref_phase(t1, t2, phi, Mv, 48, 48)
        print(f"M={Mv}: z = {z!r}  theta = {th!r}")

    print("\n== sector numbers at M=0.5, theta=0.4, 48x48 ==")
    mu, nm, npl, ns, jf = sector(t1, t2, phi, 0.5, 48, 48, 0.4)
    print("mu =", mu)
    print("nu_minus =", repr(nm))
    print("nu_plus  =", repr(npl))
    print("nu_S     =", repr(ns))
    print("JF       =", repr(jf))

    print("\n== tomography identity check (48x48) ==")
    for Mv in (0.0, 0.5, 2.5):
        F = fhs_curvature(t1, t2, phi, Mv, 48, 48)
        c = coherence_field(t1, t2, phi, Mv, 48, 48)
        mu = int(round(F.sum() / TWO_PI))
        jf = (F * c).sum() / TWO_PI
        thetas = -np.pi + (np.arange(64) + 0.5) * (TWO_PI / 64)
        direct = np.array(
            [((1 - 2 * (0.5 + np.real(np.exp(1j * t) * c))) * F).sum() / TWO_PI for t in thetas]
        )
        nu0 = (0.5 + np.real(c)) * F / TWO_PI
        nu90 = (0.5 + np.real(1j * c)) * F / TWO_PI
        rec = complex(nu0.sum() - mu / 2, -(nu90.sum() - mu / 2))
        recon = -2 * np.real(np.exp(1j * thetas) * rec)
        print(f"M={Mv}: |rec - JF| = {abs(rec - jf):.3e}  max|direct-recon| = {np.abs(direct - recon).max():.3e}")

    print("\n== multi-orbital coherence matrix, M=0.5, 48x48, Philox(2024) pair ==")
    rng = np.random.Generator(np.random.Philox(2024))
    x = rng.normal(size=2) + 1j * rng.normal(size=2)
    x /= np.linalg.norm(x)
    y = rng.normal(size=2) + 1j * rng.normal(size=2)
    y /= np.linalg.norm(y)
    F = fhs_curvature(t1, t2, phi, 0.5, 48, 48)
    c = coherence_field(t1, t2, phi, 0.5, 48, 48)
    jf_scalar = (F * c).sum() / TWO_PI
    jf_mat = jf_scalar * np.outer(x, np.conj(y))
    print("x =", repr(x))
    print("y =", repr(y))
    print("JF scalar =", repr(jf_scalar))
    print("JF matrix =", repr(jf_mat))

    print("\n== saturation case: k=(0,1), M=0 ==")
    u = valence(np.array([0.0, 1.0]), t1, t2, phi, 0.0)
    c = u[0] * np.conj(u[1])
    nz = abs(u[0]) ** 2 - abs(u[1]) ** 2
    theta_star = float(-np.angle(c))
    print("nz =", repr(float(nz)), " |c| =", repr(float(abs(c))), " theta* =", repr(theta_star))
    g, fxy, qs, eta, _ = filtered_qgt_fd([0.0, 1.0], t1, t2, phi, 0.0, theta_star)
    fq = 4 * g[0, 0]
    fqs = 4 * np.real(qs[0, 0])
    print("FQ(dir x) =", repr(float(fq)), " FQS =", repr(float(fqs)), " gap =", abs(fq - fqs))

    print("\n== FD geometry spot checks (M=0.5, h=1e-5) ==")
    for k, th in (([0.3, 0.7], 0.4), ([1.1, -0.6], -1.2), ([-0.4, 2.0], 2.9)):
        g, fxy, qs, eta, c = filtered_qgt_fd(k, t1, t2, phi, 0.5, th)
        detg = np.linalg.det(g)
        dual = np.abs(qs - eta * (g + 0.5j * np.array([[0, fxy], [-fxy, 0]]))).max()
        print(
            f"k={k} th={th}: g00={g[0,0]:.12f} g01={g[0,1]:.12f} g11={g[1,1]:.12f} "
            f"F={fxy:.12f} detg-F^2/4={detg - fxy**2 / 4:.3e} "
            f"eta={eta:.12f} dual_dev={dual:.3e}"
        )

    print("\n== filtered Riemann sum (eta/2 * F_fd), M=0.5, theta=0.4, N=24 ==")
    kk = mesh_k(24, 24).reshape(-1, 2)
    vals = []
    for kpt in kk:
        _, fxy, _, eta, _ = filtered_qgt_fd(kpt, t1, t2, phi, 0.5, 0.4, h=1e-4)
        vals.append(0.5 * eta * fxy)
    est = -np.sum(vals) * (CELL_AREA / (24 * 24)) / np.pi
    print("est =", repr(float(est)), " (FD h=1e-4; trust ~1e-7)")

    print("\n== criterion-8 band measurements (closed-form not available here; FD) ==")
    for N in (24, 48):
        kk = mesh_k(N, N).reshape(-1, 2)
        tot = 0.0
        for kpt in kk:
            _, fxy, _, _ = qgt_fd(kpt, t1, t2, phi, 0.5, h=1e-4)
            tot += fxy
        err = abs(tot * (CELL_AREA / (N * N)) / TWO_PI - (-1))
        print(f"N={N}: |Riemann - mu| = {err:.6e}  (FD noise floor ~1e-9)")


if __name__ == "__main__":
    main()
