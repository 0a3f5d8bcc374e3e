"""Eigenpairs of the smallest nontrivial Laplacian eigenvalues.

The sparse solver is a block Krylov iteration with explicit
Rayleigh-Ritz extraction and thick restarts. The known 0-eigenvector of
a graph Laplacian (the constant vector) is deflated by projecting every
basis vector against it, so the smallest Ritz value approximates the
algebraic connectivity directly. Correctness is defined by the returned
residuals, not by the iteration: every returned pair satisfies
``norm(L @ u - value * u) <= tol * max(1, 2 * max_degree)``.

Determinism: the starting block and any rank-deficiency replacement
vectors come from a seeded generator, and all linear algebra is plain
numpy, so identical inputs with the same seed reproduce results
bit-for-bit.

A dense eigendecomposition (LAPACK, via numpy) is exposed separately as
the independent reference path for the sparse solver.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import issparse


class ConvergenceError(RuntimeError):
    """The iteration did not reach the residual tolerance in max_iter steps."""


class DisconnectedGraphError(ValueError):
    """The Laplacian belongs to a disconnected graph (second eigenvalue is
    numerically zero); bridge the components before solving."""


@dataclass(frozen=True)
class SolveSettings:
    """Iteration controls for the sparse solver."""

    tol: float = 1e-8
    max_iter: int = 5000
    seed: int = 42

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be > 0")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


@dataclass(frozen=True)
class EigenPair:
    """One eigenvalue with its unit-norm eigenvector."""

    value: float
    vector: np.ndarray


@dataclass(frozen=True)
class SolveStats:
    """Work performed by one solver call."""

    iterations: int
    restarts: int
    basis_size: int


def _fix_sign(vector: np.ndarray) -> np.ndarray:
    """Flip so the entry of largest absolute value is positive; eigenvectors
    are otherwise defined only up to sign. Magnitudes within 1e-12 relative
    of the maximum count as tied and the lowest index wins, so symmetric
    vectors orient the same way regardless of rounding noise."""
    mags = np.abs(vector)
    top = float(mags.max())
    idx = int(np.argmax(mags >= top * (1.0 - 1e-12)))
    return -vector if vector[idx] < 0 else vector


def dense_eigen_oracle(matrix) -> tuple[np.ndarray, np.ndarray]:
    """Full dense symmetric eigendecomposition, for small matrices.

    Independent reference path for the sparse solver: eigenvalues in
    ascending order, eigenvectors as orthonormal columns.

    Raises:
        ValueError: order above 2000 (dense cost would be prohibitive).
    """
    dense = matrix.toarray() if issparse(matrix) else np.asarray(matrix, dtype=np.float64)
    if dense.ndim != 2 or dense.shape[0] != dense.shape[1]:
        raise ValueError("matrix must be square")
    if dense.shape[0] > 2000:
        raise ValueError(f"dense oracle limited to order 2000, got {dense.shape[0]}")
    values, vectors = np.linalg.eigh(dense)
    return values, vectors


class _DeflatedKrylov:
    """Workspace for the deflated block Krylov iteration."""

    def __init__(self, lap, n: int, cap: int, rng: np.random.Generator):
        self.lap = lap
        self.n = n
        self.cap = cap
        self.rng = rng
        self.constant = np.full(n, 1.0 / np.sqrt(n))
        self.max_dim = n - 1
        self.q = np.empty((n, cap), dtype=np.float64)
        self.aq = np.empty((n, cap), dtype=np.float64)
        self.h = np.zeros((cap, cap), dtype=np.float64)
        self.width = 0
        self.last_width = 0
        self.iterations = 0
        self.restarts = 0

    def deflate(self, v: np.ndarray) -> np.ndarray:
        if v.ndim == 1:
            return v - self.constant * (self.constant @ v)
        return v - self.constant[:, None] * (self.constant @ v)[None, :]

    def _against_basis(self, w: np.ndarray) -> np.ndarray:
        """Two projection passes against the constant vector and the basis."""
        for _ in range(2):
            w = self.deflate(w)
            if self.width:
                basis = self.q[:, : self.width]
                w -= basis @ (basis.T @ w)
        return w

    def orthonormal_block(self, w: np.ndarray) -> np.ndarray:
        """Columns orthonormalized against the constant vector, the basis and
        each other. Rank-deficient columns (invariant subspace hit) are
        replaced by fresh seeded random directions."""
        room = min(self.max_dim, self.cap) - self.width
        if room <= 0 or w.shape[1] == 0:
            return np.empty((self.n, 0))
        w = self._against_basis(w[:, : min(w.shape[1], room)].astype(np.float64, copy=True))
        scales = np.maximum(1.0, np.linalg.norm(w, axis=0))
        cols: list[np.ndarray] = []
        for j in range(w.shape[1]):
            v = w[:, j]
            scale = float(scales[j])
            for _attempt in range(6):
                for _ in range(2):
                    for u in cols:
                        v = v - u * (u @ v)
                norm = float(np.linalg.norm(v))
                if norm > 1e-10 * scale:
                    cols.append(v / norm)
                    break
                v = self._against_basis(self.rng.standard_normal((self.n, 1)))[:, 0]
                scale = max(1.0, float(np.linalg.norm(v)))
        return np.column_stack(cols) if cols else np.empty((self.n, 0))

    def append(self, xb: np.ndarray) -> None:
        b = xb.shape[1]
        w = self.width
        axb = self.lap @ xb
        self.q[:, w:w + b] = xb
        self.aq[:, w:w + b] = axb
        h_new = self.q[:, : w + b].T @ axb
        self.h[: w + b, w:w + b] = h_new
        self.h[w:w + b, :w] = h_new[:w].T
        self.width = w + b
        self.last_width = b
        self.iterations += 1

    def expand(self) -> bool:
        """Grow the basis by one block; False if no direction was left."""
        source = self.aq[:, self.width - self.last_width: self.width]
        grow = self.orthonormal_block(source)
        if grow.shape[1] == 0:
            return False
        self.append(grow)
        return True

    def ritz(self, count: int):
        w = self.width
        h = self.h[:w, :w]
        theta, y = np.linalg.eigh((h + h.T) / 2.0)
        m = min(count, w)
        u = self.q[:, :w] @ y[:, :m]
        au = self.aq[:, :w] @ y[:, :m]
        resid = np.linalg.norm(au - u * theta[:m], axis=0)
        return theta, y, u, resid

    def restart(self, y: np.ndarray, keep: int) -> None:
        k = min(keep, self.width)
        x0 = self.q[:, : self.width] @ y[:, :k]
        self.width = 0
        self.h[:, :] = 0.0
        self.restarts += 1
        self.append(x0)


def smallest_nontrivial_pairs(
    lap,
    count: int,
    settings: SolveSettings | None = None,
) -> list[EigenPair]:
    """Eigenpairs of the `count` smallest nonzero-Laplacian eigenvalues.

    See :func:`smallest_nontrivial_pairs_with_stats` for the contract.
    """
    pairs, _ = smallest_nontrivial_pairs_with_stats(lap, count, settings)
    return pairs


def smallest_nontrivial_pairs_with_stats(
    lap,
    count: int,
    settings: SolveSettings | None = None,
) -> tuple[list[EigenPair], SolveStats]:
    """Solve for the smallest nontrivial eigenpairs, reporting work done.

    Args:
        lap: symmetric graph Laplacian of a connected graph (sparse or
            dense, order n).
        count: number of pairs past the trivial 0 eigenvalue; needs
            count + 1 <= n.
        settings: tolerance, iteration cap and start-vector seed.

    Returns:
        (pairs, stats) with pairs ascending by eigenvalue. Vectors are
        unit norm, mutually orthogonal, orthogonal to the constant
        vector, and sign-fixed so the largest-magnitude entry is
        positive. Residuals satisfy
        ``norm(L u - value u) <= tol * max(1, 2 * max_degree)``.

    Raises:
        DisconnectedGraphError: second eigenvalue is numerically zero
            (below 1e-10 * max(1, 2 * max_degree)).
        ConvergenceError: residuals still above tolerance after max_iter
            block expansions.
    """
    settings = settings or SolveSettings()
    n = lap.shape[0]
    if count < 1:
        raise ValueError("count must be >= 1")
    if count + 1 > n:
        raise ValueError(f"need count + 1 <= order, got count={count}, order={n}")

    diag = lap.diagonal() if issparse(lap) else np.diagonal(np.asarray(lap, dtype=np.float64))
    lam_bound = 2.0 * float(np.max(diag))
    tol_abs = settings.tol * max(1.0, lam_bound)
    disconnect_thresh = 1e-10 * max(1.0, lam_bound)

    rng = np.random.default_rng(settings.seed)
    max_dim = n - 1
    block = min(count + 2, max_dim)
    cap = min(max_dim, max(48, 16 * block, min(512, n // 12)))
    keep = min(count + 6, cap)

    ws = _DeflatedKrylov(lap, n, cap, rng)
    start = ws.orthonormal_block(ws.deflate(rng.standard_normal((n, block))))
    if start.shape[1] == 0:
        raise ConvergenceError("could not build a starting block")
    ws.append(start)

    def finalize(theta, u):
        if float(theta[0]) < disconnect_thresh:
            raise DisconnectedGraphError(
                "graph is disconnected (second eigenvalue is numerically zero); "
                "bridge the components and retry"
            )
        pairs = []
        for i in range(count):
            vec = ws.deflate(u[:, i].copy())
            vec /= np.linalg.norm(vec)
            vec = _fix_sign(vec)
            vec.flags.writeable = False
            pairs.append(EigenPair(value=max(float(theta[i]), 0.0), vector=vec))
        stats = SolveStats(iterations=ws.iterations, restarts=ws.restarts,
                           basis_size=ws.width)
        return pairs, stats

    while True:
        space_left = min(cap, max_dim) - ws.width
        budget_out = ws.iterations >= settings.max_iter
        if space_left <= 0 or budget_out or ws.iterations % 8 == 0:
            theta, y, u, resid = ws.ritz(count)
            converged = ws.width >= count and bool(np.all(resid <= tol_abs))
            exact = ws.width >= max_dim
            if converged:
                return finalize(theta, u)
            if exact:
                # The basis spans the whole deflated space; nothing further
                # is reachable. Residuals here are at rounding level, so a
                # miss means tol was set below attainable precision.
                if float(theta[0]) < disconnect_thresh:
                    raise DisconnectedGraphError(
                        "graph is disconnected (second eigenvalue is numerically "
                        "zero); bridge the components and retry"
                    )
                raise ConvergenceError(
                    f"residuals {resid} above tolerance {tol_abs:.3e} with the "
                    f"deflated space exhausted; tol is below attainable precision"
                )
            if resid.size and resid[0] <= tol_abs and float(theta[0]) < disconnect_thresh:
                raise DisconnectedGraphError(
                    "graph is disconnected (second eigenvalue is numerically zero); "
                    "bridge the components and retry"
                )
            if budget_out:
                raise ConvergenceError(
                    f"no convergence after {ws.iterations} block iterations "
                    f"(residuals {resid}, tolerance {tol_abs:.3e})"
                )
            if space_left <= 0:
                ws.restart(y, keep)
                continue
        if not ws.expand():
            raise ConvergenceError("Krylov space exhausted before reaching tolerance")
