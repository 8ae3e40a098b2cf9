"""Feasibility vector program: per edge the three vertex vectors plus one
special vector sum to zero, and all vectors have unit norm.

The edge constraints are linear in the stacked factor, so the primary method
eliminates them exactly: restrict the factor to the null space of the edge
indicator vectors (edge sums then vanish to machine precision by
construction) and solve the remaining unit-norm system by Levenberg-Marquardt
over a ladder of small factor ranks.  Small ranks matter: surplus rank adds
flat directions along which the polish crawls.  If the ladder stalls, a
full-space phase (damped renormalized penalty descent plus an LM polish) and,
for small instances, alternating projections on the Gram matrix are tried.
A stall is never reported as an infeasibility certificate; it carries the
residuals of the best candidate (smallest worst-residual) as evidence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.linalg import null_space
from scipy.sparse.linalg import LinearOperator, cg

from .hypercore import Hypergraph
from .rng import normals, substream

DEFAULT_TOL = 1e-8

THIRD = 1.0 / 3.0


class SolverStalled(RuntimeError):
    """Residuals plateaued above tolerance; likely infeasible or under-iterated."""

    def __init__(self, message: str, norm_residual: float, edge_residual: float, iters: int):
        super().__init__(
            f"{message} (norm_residual={norm_residual:.3e}, "
            f"edge_residual={edge_residual:.3e}, iters={iters})"
        )
        self.norm_residual = norm_residual
        self.edge_residual = edge_residual
        self.iters = iters


@dataclass(frozen=True)
class SdpConfig:
    """Solver knobs.  ``rank=None`` picks min(n+1, ceil(sqrt(2m)) + 2)."""

    rank: int | None = None
    tol: float = DEFAULT_TOL
    max_iters: int = 800
    restarts: int = 5
    seed: int = 0

    def rank_for(self, H: Hypergraph) -> int:
        if self.rank is not None:
            return max(1, int(self.rank))
        return min(H.n + 1, math.ceil(math.sqrt(2 * max(H.m, 1))) + 2)


@dataclass(frozen=True)
class VectorSolution:
    """Unit vectors per vertex plus the special vector, with achieved residuals."""

    vstar: np.ndarray
    vecs: np.ndarray
    norm_residual: float
    edge_residual: float
    tol: float = DEFAULT_TOL
    iters: int = 0

    @property
    def n(self) -> int:
        return self.vecs.shape[0]

    @property
    def d(self) -> int:
        return self.vstar.shape[0]

    @classmethod
    def from_vectors(
        cls,
        H: Hypergraph,
        vstar: np.ndarray,
        vecs: np.ndarray,
        tol: float = DEFAULT_TOL,
        iters: int = 0,
    ) -> "VectorSolution":
        vstar = np.asarray(vstar, dtype=float)
        vecs = np.asarray(vecs, dtype=float).reshape(H.n, -1)
        nr, er = _residuals(H, vstar, vecs)
        return cls(vstar, vecs, nr, er, tol=tol, iters=iters)

    def gamma(self) -> np.ndarray:
        return self.vecs @ self.vstar

    def restrict(self, H_sub: Hypergraph, old_ids) -> "VectorSolution":
        """Solution rows for an induced subhypergraph; per-edge feasibility survives."""
        ids = np.asarray(list(old_ids), dtype=int)
        return VectorSolution.from_vectors(
            H_sub, self.vstar, self.vecs[ids], tol=self.tol, iters=self.iters
        )


@dataclass(frozen=True)
class GammaProfile:
    """Per-vertex projections onto the special vector, split at the balance band.

    A vertex is balanced when its gamma lies in the closed interval
    [-1/3 - eps, -1/3 + eps].
    """

    gamma: np.ndarray
    eps: float
    balanced_mask: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        gamma = np.asarray(self.gamma, dtype=float)
        object.__setattr__(self, "gamma", gamma)
        if self.balanced_mask is None:
            mask = (gamma >= -THIRD - self.eps) & (gamma <= -THIRD + self.eps)
            object.__setattr__(self, "balanced_mask", mask)

    @property
    def n(self) -> int:
        return self.gamma.shape[0]

    @property
    def balanced(self) -> np.ndarray:
        return np.flatnonzero(self.balanced_mask)

    @property
    def unbalanced(self) -> np.ndarray:
        return np.flatnonzero(~self.balanced_mask)

    def restrict(self, old_ids) -> "GammaProfile":
        ids = np.asarray(list(old_ids), dtype=int)
        return GammaProfile(self.gamma[ids], self.eps, self.balanced_mask[ids])


@dataclass(frozen=True)
class OrthoProfile:
    """Unit components orthogonal to the special vector, one row per vertex.

    Vertices whose orthogonal component was numerically zero get a fixed
    substitute direction and are listed in ``degenerate``.  Rows may live in
    max(d, 2) dimensions so a substitute direction always exists.
    """

    ubar: np.ndarray
    degenerate: frozenset[int]

    @property
    def n(self) -> int:
        return self.ubar.shape[0]

    @property
    def dim(self) -> int:
        return self.ubar.shape[1]

    def restrict(self, old_ids) -> "OrthoProfile":
        ids = list(int(v) for v in old_ids)
        remap = {old: new for new, old in enumerate(ids)}
        degen = frozenset(remap[v] for v in self.degenerate if v in remap)
        return OrthoProfile(self.ubar[np.asarray(ids, dtype=int)], degen)


def _residuals(H: Hypergraph, vstar: np.ndarray, vecs: np.ndarray) -> tuple[float, float]:
    norms = np.concatenate([(vecs * vecs).sum(axis=1), [float(vstar @ vstar)]])
    norm_res = float(np.abs(norms - 1.0).max()) if norms.size else 0.0
    if H.m == 0:
        return norm_res, 0.0
    E = H.edge_array()
    T = vecs[E[:, 0]] + vecs[E[:, 1]] + vecs[E[:, 2]] + vstar
    return norm_res, float(np.linalg.norm(T, axis=1).max())


def residual(H: Hypergraph, sol: VectorSolution) -> tuple[float, float]:
    """Exact (max |norm^2 - 1|, max per-edge sum norm) for a candidate solution."""
    return _residuals(H, sol.vstar, sol.vecs)


def _penalty_descent(X, E, deg, tol, max_sweeps, omega=0.5, patience=150):
    """Damped renormalized block descent on the summed edge penalty.

    Stops at tolerance or when the residual has not improved by 0.1% for
    ``patience`` sweeps (plateau), handing off to the second-order polish.
    """
    n1 = X.shape[0]
    n = n1 - 1
    degall = np.concatenate([deg, [float(len(E))]])
    active = degall > 0
    res = 0.0
    best = math.inf
    best_sweep = 0
    for sweep in range(max_sweeps):
        T = X[E[:, 0]] + X[E[:, 1]] + X[E[:, 2]] + X[n]
        res = float(np.linalg.norm(T, axis=1).max()) if len(E) else 0.0
        if res <= tol:
            return X, sweep, res
        if res < best * 0.999:
            best, best_sweep = res, sweep
        elif sweep - best_sweep > patience:
            return X, sweep, res
        W = np.zeros_like(X)
        np.add.at(W, E[:, 0], T)
        np.add.at(W, E[:, 1], T)
        np.add.at(W, E[:, 2], T)
        W[n] += T.sum(axis=0)
        W[active] -= degall[active, None] * X[active]
        target = -W[active]
        tn = np.linalg.norm(target, axis=1, keepdims=True)
        ok = tn[:, 0] > 1e-15
        stepped = X[active].copy()
        stepped[ok] = (1.0 - omega) * X[active][ok] + omega * (target[ok] / tn[ok])
        stepped /= np.linalg.norm(stepped, axis=1, keepdims=True)
        X[active] = stepped
    return X, max_sweeps, res


def _lm_polish(X, E, tol, max_iters):
    """Levenberg-Marquardt on stacked edge-sum and unit-norm residuals."""
    n1, r = X.shape
    n = n1 - 1
    rows, cols = [], []
    for a, b, c in E:
        quad = (a, b, c, n)
        for i in quad:
            for j in quad:
                rows.append(i)
                cols.append(j)
    A = sp.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n1, n1))

    def residual_parts(Y):
        T = Y[E[:, 0]] + Y[E[:, 1]] + Y[E[:, 2]] + Y[n] if len(E) else np.zeros((0, r))
        g = (Y * Y).sum(axis=1) - 1.0
        return T, g

    def value(T, g):
        return float((T * T).sum() + (g * g).sum())

    lam = 1e-4
    T, g = residual_parts(X)
    val = value(T, g)
    iters = 0
    for iters in range(1, max_iters + 1):
        edge_res = float(np.linalg.norm(T, axis=1).max()) if len(E) else 0.0
        norm_res = float(np.abs(g).max())
        if edge_res <= tol and norm_res <= tol:
            return X, iters - 1, True
        JtF = np.zeros_like(X)
        if len(E):
            np.add.at(JtF, E[:, 0], T)
            np.add.at(JtF, E[:, 1], T)
            np.add.at(JtF, E[:, 2], T)
            JtF[n] += T.sum(axis=0)
        JtF += 2.0 * g[:, None] * X
        Xc = X

        def matvec(dvec):
            D = dvec.reshape(n1, r)
            out = A @ D
            out = out + 4.0 * ((Xc * D).sum(axis=1))[:, None] * Xc
            return (out + lam * D).ravel()

        op = LinearOperator((n1 * r, n1 * r), matvec=matvec)
        delta, _ = cg(op, -JtF.ravel(), rtol=1e-10, atol=0.0, maxiter=500)
        trial = X + delta.reshape(n1, r)
        Tt, gt = residual_parts(trial)
        tv = value(Tt, gt)
        if tv < val:
            X, T, g, val = trial, Tt, gt, tv
            lam = max(lam * 0.3, 1e-13)
        else:
            lam *= 10.0
            if lam > 1e9:
                break
    return X, iters, False


def _edge_null_basis(H: Hypergraph) -> np.ndarray:
    """Orthonormal basis of the space orthogonal to every edge indicator.

    Any stacked factor built from these columns satisfies all edge-sum
    constraints identically; only the unit-norm rows remain to be arranged.
    """
    N = H.n + 1
    Z = np.zeros((N, H.m))
    for e, (a, b, c) in enumerate(H.edges):
        Z[[a, b, c, H.n], e] = 1.0
    return null_space(Z.T)


def _reduced_lm(B: np.ndarray, Y: np.ndarray, tol: float, max_iters: int):
    """Levenberg-Marquardt on the unit-norm residuals of rows of B @ Y."""
    N, q = B.shape
    r = Y.shape[1]
    lam = 1e-3
    R = B @ Y
    f = (R * R).sum(axis=1) - 1.0
    val = float(f @ f)
    iters = 0
    for iters in range(1, max_iters + 1):
        if np.abs(f).max() <= tol:
            return Y, iters - 1, True
        JtF = 2.0 * (B.T @ (f[:, None] * R))
        M = 4.0 * np.einsum(
            "ip,is,iq,it->psqt", B, R, B, R, optimize=True
        ).reshape(q * r, q * r)
        try:
            step = np.linalg.solve(M + lam * np.eye(q * r), -JtF.ravel())
        except np.linalg.LinAlgError:
            lam *= 10.0
            continue
        trial = Y + step.reshape(q, r)
        Rt = B @ trial
        ft = (Rt * Rt).sum(axis=1) - 1.0
        vt = float(ft @ ft)
        if vt < val:
            Y, R, f, val = trial, Rt, ft, vt
            lam = max(lam * 0.3, 1e-14)
        else:
            lam *= 10.0
            if lam > 1e10:
                break
    return Y, iters, False


def _reduced_rank_ladder(q: int, cap: int | None, max_dof: int = 1200) -> list[int]:
    ranks = sorted({min(q, r) for r in (3, 4, 6, 8)})
    if q <= 8 and q not in ranks:
        ranks.append(q)
    if cap is not None:
        ranks = sorted({min(r, cap) for r in ranks})
    # Each LM step solves a dense (q*r)^2 system; keep that tractable and let
    # the full-space phase handle very wide null spaces.
    return [r for r in ranks if r >= 1 and q * r <= max_dof]


def _gram_altproj(H: Hypergraph, tol: float, max_iters: int = 3000):
    """Alternating projection between the PSD cone and the affine constraint set.

    Works on the (n+1) x (n+1) Gram matrix; usable at small n only.
    """
    n = H.n
    N = n + 1
    constraints: list[tuple[np.ndarray, np.ndarray, float]] = []
    for i in range(N):
        constraints.append((np.array([i]), np.array([i]), 1.0))
    for a, b, c in H.edges:
        quad = np.array([a, b, c, n])
        ri = np.repeat(quad, 4)
        ci = np.tile(quad, 4)
        constraints.append((ri, ci, 0.0))
    k = len(constraints)
    gram = np.zeros((k, k))
    mats = []
    for ri, ci, _ in constraints:
        M = np.zeros((N, N))
        np.add.at(M, (ri, ci), 1.0)
        mats.append(M)
    for i in range(k):
        for j in range(i, k):
            gram[i, j] = gram[j, i] = float((mats[i] * mats[j]).sum())
    b = np.array([t for _, _, t in constraints])
    chol = np.linalg.cholesky(gram + 1e-12 * np.eye(k))

    def project_affine(G):
        vals = np.array([float((M * G).sum()) for M in mats])
        lam = np.linalg.solve(chol.T, np.linalg.solve(chol, vals - b))
        out = G.copy()
        for coeff, M in zip(lam, mats):
            out -= coeff * M
        return out

    G = np.eye(N)
    it = 0
    for it in range(1, max_iters + 1):
        G = project_affine(G)
        w, U = np.linalg.eigh((G + G.T) / 2.0)
        w = np.clip(w, 0.0, None)
        G = (U * w) @ U.T
        diag_res = float(np.abs(np.diag(G) - 1.0).max())
        edge_sq = 0.0
        for ri, ci, _ in constraints[N:]:
            edge_sq = max(edge_sq, abs(float(G[ri, ci].sum())))
        # edge_sq is a squared norm; the diagonal deviation is not.
        if diag_res <= tol and edge_sq <= tol * tol:
            break
    w, U = np.linalg.eigh((G + G.T) / 2.0)
    keep = w > max(w.max(), 0.0) * 1e-12 if w.size else w > 0
    B = U[:, keep] * np.sqrt(np.clip(w[keep], 0.0, None))
    if B.shape[1] == 0:
        B = np.zeros((N, 1))
        B[:, 0] = 1.0
    return B[:n], B[n], it


def solve_feasibility(
    H: Hypergraph,
    cfg: SdpConfig | None = None,
    *,
    warm: tuple[np.ndarray, np.ndarray] | None = None,
) -> VectorSolution:
    """Find unit vectors meeting every edge-sum constraint within ``cfg.tol``.

    ``warm`` is an optional (vstar, vecs) starting point, e.g. a planted
    certificate; if it already meets tolerance it is returned with zero
    iterations.  Raises :class:`SolverStalled` when every attempt plateaus.
    """
    cfg = cfg or SdpConfig()
    if H.n == 0:
        return VectorSolution(np.array([1.0]), np.zeros((0, 1)), 0.0, 0.0, tol=cfg.tol)
    if H.m == 0:
        vstar = np.array([1.0])
        vecs = np.ones((H.n, 1))
        return VectorSolution(vstar, vecs, 0.0, 0.0, tol=cfg.tol)

    if warm is not None:
        vstar = np.asarray(warm[0], dtype=float)
        vecs = np.asarray(warm[1], dtype=float).reshape(H.n, -1)
        nr, er = _residuals(H, vstar, vecs)
        if nr <= cfg.tol and er <= cfg.tol:
            return VectorSolution(vstar, vecs, nr, er, tol=cfg.tol, iters=0)

    E = H.edge_array()
    deg = H.degrees().astype(float)
    total_iters = 0
    # Candidates ranked by their worst residual; used for stall evidence.
    best: tuple[float, float, float, np.ndarray] | None = None

    def consider(X):
        nonlocal best
        nr, er = _residuals(H, X[H.n], X[: H.n])
        worst = max(nr, er)
        if best is None or worst < best[0]:
            best = (worst, nr, er, X.copy())
        return nr, er

    r = cfg.rank_for(H)

    def full_space_attempt(X):
        nonlocal total_iters
        X = X / np.maximum(np.linalg.norm(X, axis=1, keepdims=True), 1e-12)
        # The first-order phase only needs to reach the polish method's basin.
        X, sweeps, _ = _penalty_descent(X, E, deg, max(cfg.tol, 5e-2), cfg.max_iters)
        X, lm_iters, ok = _lm_polish(X, E, cfg.tol, 80)
        total_iters += sweeps + lm_iters
        nr, er = consider(X)
        return X, nr, er, ok

    # A warm start is an explicit request to search near that point, so it
    # runs before the blind phases.
    if warm is not None:
        wv = np.asarray(warm[1], dtype=float).reshape(H.n, -1)
        X = np.zeros((H.n + 1, max(r, wv.shape[1])))
        X[: H.n, : wv.shape[1]] = wv
        X[H.n, : wv.shape[1]] = np.asarray(warm[0], dtype=float)
        X, nr, er, ok = full_space_attempt(X)
        if ok and nr <= cfg.tol and er <= cfg.tol:
            return VectorSolution(
                X[H.n].copy(), X[: H.n].copy(), nr, er, tol=cfg.tol, iters=total_iters
            )

    # Phase 1: exact edge-constraint elimination, unit norms by reduced LM.
    B = _edge_null_basis(H)
    q = B.shape[1]
    for rr in _reduced_rank_ladder(q, cfg.rank):
        for attempt in range(2):
            rng = substream(cfg.seed, f"sdp:reduced:{rr}:{attempt}")
            Y0 = normals(rng, (q, rr)) / math.sqrt(rr)
            Y, it, ok = _reduced_lm(B, Y0, cfg.tol, 300)
            total_iters += it
            X = B @ Y
            nr, er = consider(X)
            if ok and nr <= cfg.tol and er <= cfg.tol:
                return VectorSolution(
                    X[H.n].copy(), X[: H.n].copy(), nr, er, tol=cfg.tol, iters=total_iters
                )

    # Phase 2: full-space penalty descent plus LM polish, random restarts.
    for attempt in range(max(1, cfg.restarts)):
        rng = substream(cfg.seed, f"sdp:init:{attempt}")
        X, nr, er, ok = full_space_attempt(normals(rng, (H.n + 1, r)))
        if ok and nr <= cfg.tol and er <= cfg.tol:
            return VectorSolution(
                X[H.n].copy(), X[: H.n].copy(), nr, er, tol=cfg.tol, iters=total_iters
            )

    # Phase 3: alternating projections on the Gram matrix (small instances).
    if H.n <= 60:
        vecs, vstar, it = _gram_altproj(H, max(cfg.tol, 1e-9))
        total_iters += it
        X = np.concatenate([vecs, vstar[None, :]], axis=0)
        X, lm_iters, _ = _lm_polish(X, E, cfg.tol, 80)
        total_iters += lm_iters
        nr, er = consider(X)
        if nr <= cfg.tol and er <= cfg.tol:
            return VectorSolution(
                X[H.n].copy(), X[: H.n].copy(), nr, er, tol=cfg.tol, iters=total_iters
            )

    _, nr, er, _ = best
    raise SolverStalled("solver stalled above tolerance", nr, er, total_iters)


def gamma_profile(sol: VectorSolution, eps: float) -> GammaProfile:
    """Projections onto the special vector with the balanced/unbalanced split.

    ``eps`` below 100x the solver tolerance would classify solver noise, so it
    is rejected.
    """
    if eps < 100 * sol.tol:
        raise ValueError(f"eps={eps} below 100*tol={100 * sol.tol}; band would be noise")
    return GammaProfile(sol.gamma(), eps)


def unit_orthogonal(v: np.ndarray) -> np.ndarray:
    """A deterministic unit vector orthogonal to v (dim >= 2)."""
    v = np.asarray(v, dtype=float)
    i = int(np.argmin(np.abs(v)))
    e = np.zeros_like(v)
    e[i] = 1.0
    w = e - (v @ e) / max(v @ v, 1e-300) * v
    return w / np.linalg.norm(w)


def ortho_profile(sol: VectorSolution) -> OrthoProfile:
    """Normalized components orthogonal to the special vector.

    A vertex whose component norm is at most 10x solver tolerance is
    degenerate and receives a fixed substitute orthogonal direction.  When the
    solution is one-dimensional the vectors are padded to two dimensions so
    that substitute exists.
    """
    vstar = sol.vstar
    vecs = sol.vecs
    if sol.d < 2:
        vstar = np.concatenate([vstar, [0.0]])
        vecs = np.concatenate([vecs, np.zeros((sol.n, 1))], axis=1)
    # Project against the normalized direction: that keeps the output exactly
    # orthogonal even when the special vector's norm is only 1 +- tol, which
    # matters for vertices with a tiny orthogonal component.
    vhat = vstar / np.linalg.norm(vstar)
    comp = vecs - (vecs @ vhat)[:, None] * vhat[None, :]
    norms = np.linalg.norm(comp, axis=1)
    cutoff = 10.0 * sol.tol
    degen = norms <= cutoff
    ubar = np.empty_like(comp)
    fallback = unit_orthogonal(vstar)
    ubar[degen] = fallback
    ubar[~degen] = comp[~degen] / norms[~degen, None]
    return OrthoProfile(ubar, frozenset(int(v) for v in np.flatnonzero(degen)))
