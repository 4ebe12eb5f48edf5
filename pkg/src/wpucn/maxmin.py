"""Max-min fair energy beamforming over the spectrahedron.

Solves

    maximize_V  min_n tr(V A_n)   s.t.  tr(V) = 1,  V >= 0

through the minimax identity

    max_V min_n tr(V A_n) = min_{w in simplex} lambda_max(sum_n w_n A_n).

Two solvers are provided. ``method="barrier"`` (default) follows the central
path of the dual problem ``min lambda s.t. lambda I - sum w_n A_n >= 0,
w in simplex`` with damped Newton steps; the primal ``V`` is read off the
barrier as ``S^{-1} / t``. ``method="eg"`` drives ``w`` with
exponentiated-gradient steps (dual averaging), collects each iterate's top
eigenvector as a primal atom ``u u^H`` and finishes with column generation
over the atoms. Both report a certified dual bound ``lambda_max``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

__all__ = ["MaxMinInstance", "MaxMinSolution", "solve_maxmin", "brute_force_maxmin"]


@dataclass(frozen=True)
class MaxMinInstance:
    """Payoff matrices ``A_n``; rank-one instances keep only the vectors ``b_n``.

    With ``A_n = b_n b_n^H``, ``tr(V A_n) = b_n^H V b_n``.
    """

    A: np.ndarray                  # (N, Q, Q) Hermitian PSD
    tolerance: float = 1e-4
    vectors: np.ndarray | None = field(default=None, compare=False)

    @classmethod
    def from_channels(cls, h, p: float, delta, tolerance: float = 1e-4) -> "MaxMinInstance":
        """``A_n = (p / delta_n) h_n h_n^H`` for channel rows ``h`` of shape (N, Q)."""
        h = np.atleast_2d(np.asarray(h, dtype=complex))
        scale = np.sqrt(p / np.broadcast_to(np.asarray(delta, dtype=float), h.shape[:1]))
        b = h * scale[:, None]
        A = np.einsum("ni,nj->nij", b, b.conj())
        return cls(A, tolerance, b)

    @property
    def N(self) -> int:
        return self.A.shape[0]

    @property
    def Q(self) -> int:
        return self.A.shape[1]

    def values(self, V) -> np.ndarray:
        """``tr(V A_n)`` for every ``n``."""
        if self.vectors is not None:
            b = self.vectors
            return np.einsum("ni,ij,nj->n", b.conj(), V, b).real
        return np.einsum("ij,nji->n", V, self.A).real

    def atom_values(self, u) -> np.ndarray:
        """``u^H A_n u`` for a unit vector ``u``."""
        if self.vectors is not None:
            return np.abs(self.vectors.conj() @ u) ** 2
        return np.einsum("i,nij,j->n", u.conj(), self.A, u).real

    def weighted(self, w) -> np.ndarray:
        if self.vectors is not None:
            b = self.vectors
            return (b.T * w) @ b.conj()
        return np.tensordot(w, self.A, axes=1)


@dataclass
class MaxMinSolution:
    V: np.ndarray
    xi_csi: float
    dual_weights: np.ndarray
    gap: float
    iterations: int
    converged: bool
    dual_bound: float = float("nan")
    history: dict = field(default_factory=dict, repr=False)


def _top_eig(M):
    lam, U = np.linalg.eigh(M)
    return lam[-1], U[:, -1]


def solve_maxmin(instance: MaxMinInstance, method: str = "barrier", max_iter: int = 5000,
                 record: bool = False) -> MaxMinSolution:
    """Solve the max-min beamforming SDP to a relative primal-dual gap.

    Returns the best primal ``V`` found; ``converged`` is False when
    ``max_iter`` is reached before the gap drops below ``instance.tolerance``.
    """
    if method == "barrier":
        return _solve_barrier(instance, max_iter, record)
    if method == "eg":
        return _solve_eg(instance, max_iter, record=record)
    raise ValueError(f"unknown method {method!r}")


def _solve_barrier(instance: MaxMinInstance, max_iter: int, record: bool) -> MaxMinSolution:
    N, Q = instance.N, instance.Q
    tol = instance.tolerance
    traces = np.einsum("nii->n", instance.A).real
    scale = float(traces.max())
    if not scale > 0:
        return MaxMinSolution(np.eye(Q, dtype=complex) / Q, 0.0, np.full(N, 1.0 / N), 0.0, 0, True)
    A = instance.A / scale
    rank_one = instance.vectors is not None
    b = instance.vectors / np.sqrt(scale) if rank_one else None
    eye = np.eye(Q)

    def weighted(w):
        return (b.T * w) @ b.conj() if rank_one else np.tensordot(w, A, axes=1)

    def slack(w, lam):
        S = lam * eye - weighted(w)
        try:
            L = np.linalg.cholesky(S)
        except np.linalg.LinAlgError:
            return None, None
        return S, L

    w = np.full(N, 1.0 / N)
    lam = float(np.linalg.eigvalsh(weighted(w))[-1]) + 1.0
    t = 1.0
    m = N + Q
    it = 0
    hist_primal, hist_dual = [], []
    best = None

    def phi(w, lam, L):
        return t * lam - 2.0 * np.sum(np.log(np.diag(L).real)) - np.sum(np.log(w))

    while it < max_iter:
        # centering by damped Newton
        for _ in range(100):
            it += 1
            S, L = slack(w, lam)
            Sinv = np.linalg.inv(S)
            Sinv = (Sinv + Sinv.conj().T) / 2.0
            if rank_one:
                G1 = b.conj() @ Sinv @ b.T
                H_ww = np.abs(G1) ** 2
                tr_n = np.diag(G1).real
                tr2_n = np.einsum("ni,ij,nj->n", b.conj(), Sinv @ Sinv, b).real
            else:
                SA = np.einsum("ij,njk->nik", Sinv, A)
                H_ww = np.einsum("nij,mji->nm", SA, SA).real
                tr_n = np.einsum("nii->n", SA).real
                tr2_n = np.einsum("ij,nji->n", Sinv @ Sinv, A).real
            g = np.empty(N + 1)
            g[:N] = tr_n - 1.0 / w
            g[N] = t - np.trace(Sinv).real
            H = np.empty((N + 1, N + 1))
            H[:N, :N] = H_ww + np.diag(1.0 / w**2)
            H[:N, N] = H[N, :N] = -tr2_n
            H[N, N] = np.trace(Sinv @ Sinv).real
            K = np.zeros((N + 2, N + 2))
            K[: N + 1, : N + 1] = H
            K[:N, N + 1] = K[N + 1, :N] = 1.0
            rhs = np.concatenate([-g, [0.0]])
            try:
                step = np.linalg.solve(K, rhs)[: N + 1]
            except np.linalg.LinAlgError:
                step = np.linalg.lstsq(K, rhs, rcond=None)[0][: N + 1]
            decrement = float(-g @ step)
            if decrement / 2.0 <= 1e-10:
                break
            dw, dlam = step[:N], step[N]
            f0 = phi(w, lam, L)
            s = 1.0
            neg = dw < 0
            if np.any(neg):
                s = min(1.0, 0.99 * float(np.min(-w[neg] / dw[neg])))
            while s > 1e-14:
                w_new, lam_new = w + s * dw, lam + s * dlam
                S_new, L_new = slack(w_new, lam_new)
                if L_new is not None and phi(w_new, lam_new, L_new) <= f0 - 0.25 * s * decrement:
                    break
                s *= 0.5
            else:
                break
            w, lam = w_new, lam_new
        S, L = slack(w, lam)
        # eigen-form inverse keeps V PSD even when S is nearly singular
        s_eig, U = np.linalg.eigh(S)
        s_eig = np.maximum(s_eig, s_eig[-1] * 1e-300 + 1e-300)
        V = (U / s_eig) @ U.conj().T
        V /= np.trace(V).real
        primal = float(_values(V, A, b).min())
        dual = float(np.linalg.eigvalsh(weighted(w / w.sum()))[-1])
        if best is None or primal > best[1]:
            best = (V, primal)
        best_dual = min(dual, hist_dual[-1]) if hist_dual else dual
        hist_primal.append(best[1])
        hist_dual.append(best_dual)
        if best[1] > best_dual * (1 + 1e-9) + 1e-12:
            raise AssertionError(f"weak duality violated: {best[1]!r} > {best_dual!r} at t={t:g}")
        if best_dual - best[1] <= tol * best_dual or m / t < 1e-13:
            break
        t *= 10.0

    V, primal = best
    dual = hist_dual[-1]
    gap = max(dual - primal, 0.0) / dual
    xi = float(instance.values(V).min())
    history = {"primal": np.array(hist_primal) * scale, "dual": np.array(hist_dual) * scale} if record else {}
    return MaxMinSolution(V, xi, w, float(gap), it, bool(gap <= tol), dual * scale, history)


def _values(V, A, b):
    if b is not None:
        return np.einsum("ni,ij,nj->n", b.conj(), V, b).real
    return np.einsum("ij,nji->n", V, A).real


def _solve_eg(instance: MaxMinInstance, max_iter: int, eg_iters: int = 100,
              record: bool = False) -> MaxMinSolution:
    N, Q = instance.N, instance.Q
    tol = instance.tolerance
    traces = np.einsum("nii->n", instance.A).real
    scale = float(traces.max())
    if not scale > 0:
        return MaxMinSolution(np.eye(Q, dtype=complex) / Q, 0.0, np.full(N, 1.0 / N), 0.0, 0, True)

    atoms: list[np.ndarray] = []
    payoff: list[np.ndarray] = []          # rows: u_j^H A_n u_j / scale
    hist_primal: list[float] = []
    hist_dual: list[float] = []
    best_dual = np.inf
    best_w = np.full(N, 1.0 / N)
    best_primal = -np.inf
    best_coef = None

    def add_atom(w):
        nonlocal best_dual, best_w
        lam, u = _top_eig(instance.weighted(w) / scale)
        if lam < best_dual:
            best_dual, best_w = float(lam), w.copy()
        atoms.append(u)
        payoff.append(instance.atom_values(u) / scale)
        return payoff[-1]

    def record_iter():
        hist_primal.append(best_primal)
        hist_dual.append(best_dual)
        if best_primal > best_dual * (1 + 1e-9) + 1e-12:
            raise AssertionError(f"weak duality violated: {best[1]!r} > {best_dual!r} at t={t:g}")

    # exponentiated gradient on the simplex, lazy (dual-averaging) form
    grad_sum = np.zeros(N)
    w = np.full(N, 1.0 / N)
    eta0 = np.sqrt(2.0 * np.log(max(N, 2)))
    it = 0
    for it in range(1, min(eg_iters, max_iter) + 1):
        g = add_atom(w)
        grad_sum += g
        avg = grad_sum / it
        if avg.min() > best_primal:
            best_primal = float(avg.min())
            best_coef = np.full(it, 1.0 / it)
        record_iter()
        if best_dual - best_primal <= tol * best_dual:
            break
        eta = eta0 / np.sqrt(it)
        # weights concentrate on the UDs with the lowest accumulated payoff
        z = -eta * (grad_sum - grad_sum.min())
        w = np.exp(z)
        w /= w.sum()

    # column generation over the collected atoms
    while best_dual - best_primal > tol * best_dual and it < max_iter:
        it += 1
        P = np.asarray(payoff)                     # (J, N)
        J = P.shape[0]
        c = np.zeros(J + 1)
        c[-1] = -1.0
        A_ub = np.hstack([-P.T, np.ones((N, 1))])
        A_eq = np.zeros((1, J + 1))
        A_eq[0, :J] = 1.0
        res = linprog(c, A_ub=A_ub, b_ub=np.zeros(N), A_eq=A_eq, b_eq=[1.0],
                      bounds=[(0, None)] * J + [(None, None)], method="highs")
        if res.status != 0:
            break
        coef = np.clip(res.x[:J], 0.0, None)
        coef /= coef.sum()
        value = float((coef @ P).min())
        if value > best_primal:
            best_primal, best_coef = value, coef
        w = np.clip(-res.ineqlin.marginals, 0.0, None)
        w = w / w.sum() if w.sum() > 0 else np.full(N, 1.0 / N)
        add_atom(w)
        record_iter()

    U = np.asarray(atoms[: len(best_coef)])
    V = (U.T * best_coef) @ U.conj()
    V = (V + V.conj().T) / 2.0
    V /= np.trace(V).real
    xi = float(instance.values(V).min())
    gap = max(best_dual - best_primal, 0.0) / best_dual
    history = {"primal": np.array(hist_primal) * scale, "dual": np.array(hist_dual) * scale} if record else {}
    return MaxMinSolution(V, xi, best_w, float(gap), it, bool(gap <= tol),
                          best_dual * scale, history)


_PAULI = np.array([
    [[0, 1], [1, 0]],
    [[0, -1j], [1j, 0]],
    [[1, 0], [0, -1]],
], dtype=complex)


def brute_force_maxmin(instance: MaxMinInstance, grid: int = 21, levels: int = 60):
    """Grid search over all 2x2 density matrices ``V = (I + r . sigma) / 2``.

    The objective is concave in the Bloch vector ``r`` (a minimum of affine
    functions), so zooming the grid around the incumbent converges to the
    global optimum. Points outside the unit ball are projected onto it.
    """
    if instance.Q != 2:
        raise ValueError("brute_force_maxmin only handles Q = 2")
    A = instance.A
    const = np.einsum("nii->n", A).real / 2.0
    lin = np.einsum("kij,nji->nk", _PAULI, A).real / 2.0    # (N, 3)

    def objective(r):
        return (const[None, :] + r @ lin.T).min(axis=1)

    center = np.zeros(3)
    half = 1.0
    best_r, best_val = center, -np.inf
    axis = np.linspace(-1.0, 1.0, grid)
    for _ in range(levels):
        pts = center + half * np.array(list(itertools.product(axis, axis, axis)))
        norm = np.linalg.norm(pts, axis=1)
        pts[norm > 1] /= norm[norm > 1, None]
        vals = objective(pts)
        k = int(np.argmax(vals))
        if vals[k] >= best_val:
            best_val, best_r = float(vals[k]), pts[k]
        center = best_r
        half *= 0.5
        if half < 1e-12:
            break
    V = (np.eye(2) + np.tensordot(best_r, _PAULI, axes=1)) / 2.0
    return best_val, V
