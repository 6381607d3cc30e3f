"""From-scratch 2-D manifold projection.

The full pipeline: exact k-nearest-neighbor graph, per-point smoothed
distance calibration, fuzzy t-conorm symmetrization, low-dimensional
curve fitting, spectral (or random) initialization, and the stochastic
attract/repel layout.  A deterministic PCA projection is provided as a
fallback.  Every stage is seeded and single-threaded by contract, so a
given bundle, parameter set and seed reproduce coordinates bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from topiclens import _accel

SMOOTH_K_TOLERANCE = 1e-5
MIN_K_DIST_SCALE = 1e-3

__all__ = [
    "NeighborGraph",
    "FuzzyGraph",
    "Projection2D",
    "UmapParams",
    "CurveFitError",
    "LayoutError",
    "knn_graph",
    "smooth_knn",
    "fuzzy_union",
    "fit_ab",
    "initialize_layout",
    "optimize_layout",
    "umap_project",
    "pca_project",
]


@dataclass
class NeighborGraph:
    """Exact k-nearest neighbors of P points.

    indices[i] holds the k neighbor indices of point i sorted by
    ascending distance (ties by ascending index); distances[i] holds the
    matching distances.  Self-neighbors are excluded.
    """

    indices: np.ndarray  # (P, k) int64
    distances: np.ndarray  # (P, k) float64
    metric: str

    @property
    def n_points(self) -> int:
        return self.indices.shape[0]

    @property
    def n_neighbors(self) -> int:
        return self.indices.shape[1]


@dataclass
class FuzzyGraph:
    """Symmetric fuzzy membership graph with calibration terms.

    weights is a sparse symmetric P x P matrix with zero diagonal and
    entries in [0, 1]; rho and sigma are the per-point offsets and
    bandwidths found by smooth_knn, with sigma_clamped flagging points
    whose bandwidth hit the clamp floor.
    """

    weights: sparse.csr_matrix
    rho: np.ndarray
    sigma: np.ndarray
    sigma_clamped: np.ndarray

    @property
    def n_points(self) -> int:
        return self.weights.shape[0]


@dataclass
class Projection2D:
    coordinates: np.ndarray  # (P, 2) float64
    params: dict = field(default_factory=dict)

    @property
    def n_points(self) -> int:
        return self.coordinates.shape[0]


@dataclass
class UmapParams:
    """Projection hyperparameters.

    epochs=None resolves to 500, or 200 for more than 10000 points.
    n_neighbors is clamped to P - 1 at fit time.
    """

    n_neighbors: int = 15
    min_dist: float = 0.1
    spread: float = 1.0
    epochs: int | None = None
    learning_rate: float = 1.0
    negative_samples: int = 5
    metric: str = "cosine"
    local_connectivity: int = 1
    init: str = "spectral"
    seed: int = 0

    def resolve_epochs(self, n_points: int) -> int:
        if self.epochs is not None:
            return self.epochs
        return 200 if n_points > 10000 else 500


class CurveFitError(Exception):
    """fit_ab failed to converge; carries the last iterate."""

    def __init__(self, message: str, a: float, b: float):
        super().__init__(message)
        self.a = a
        self.b = b


class LayoutError(Exception):
    """A coordinate went non-finite; carries the epoch and point."""

    def __init__(self, epoch: int, point: int):
        super().__init__(
            f"non-finite coordinate at epoch {epoch}, point {point}")
        self.epoch = epoch
        self.point = point


def _pairwise_distances(points: np.ndarray, metric: str) -> np.ndarray:
    """Dense all-pairs distances; zero-norm rows get cosine distance 1."""
    if metric == "euclidean":
        sq = (points * points).sum(axis=1)
        d2 = sq[:, None] + sq[None, :] - 2.0 * (points @ points.T)
        np.clip(d2, 0.0, None, out=d2)
        return np.sqrt(d2)
    if metric == "cosine":
        norms = np.sqrt((points * points).sum(axis=1))
        safe = np.where(norms == 0.0, 1.0, norms)
        unit = points / safe[:, None]
        sim = unit @ unit.T
        np.clip(sim, -1.0, 1.0, out=sim)
        return 1.0 - sim
    raise ValueError(f"unknown metric: {metric!r}")


def knn_graph(points: np.ndarray, k: int, metric: str = "cosine",
              chunk_size: int = 512) -> NeighborGraph:
    """Compute the exact k-nearest-neighbor graph by brute force.

    Parameters
    ----------
    points: array of shape (n_points, n_features)
        The data to build the graph over.

    k: int (positive)
        Neighbors per point; clamped to n_points - 1.

    metric: string (optional, default "cosine")
        Either "cosine" or "euclidean".  Cosine distance of a zero-norm
        vector against anything is defined as 1.

    chunk_size: int (optional, default 512)
        Row-block size for the distance computation; results do not
        depend on it.

    Returns
    -------
    graph: NeighborGraph
        Exact neighbors, distance-ascending, ties by ascending index.
    """
    points = np.asarray(points, dtype=np.float64)
    n_points = points.shape[0]
    if n_points < 2:
        raise ValueError(f"need at least 2 points, got {n_points}")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    k = min(k, n_points - 1)
    indices = np.empty((n_points, k), dtype=np.int64)
    distances = np.empty((n_points, k), dtype=np.float64)
    for start in range(0, n_points, chunk_size):
        stop = min(start + chunk_size, n_points)
        block = _block_distances(points, start, stop, metric)
        block[np.arange(stop - start), np.arange(start, stop)] = np.inf
        # Stable argsort so equal distances resolve to the lower index.
        order = np.argsort(block, axis=1, kind="stable")[:, :k]
        indices[start:stop] = order
        distances[start:stop] = np.take_along_axis(block, order, axis=1)
    return NeighborGraph(indices=indices, distances=distances, metric=metric)


def _block_distances(points: np.ndarray, start: int, stop: int,
                     metric: str) -> np.ndarray:
    if metric == "euclidean":
        sq = (points * points).sum(axis=1)
        d2 = sq[start:stop, None] + sq[None, :] - 2.0 * (points[start:stop] @ points.T)
        np.clip(d2, 0.0, None, out=d2)
        return np.sqrt(d2)
    if metric == "cosine":
        norms = np.sqrt((points * points).sum(axis=1))
        safe = np.where(norms == 0.0, 1.0, norms)
        unit = points / safe[:, None]
        sim = unit[start:stop] @ unit.T
        np.clip(sim, -1.0, 1.0, out=sim)
        return 1.0 - sim
    raise ValueError(f"unknown metric: {metric!r}")


def smooth_knn(distances: np.ndarray, local_connectivity: int = 1,
               target: float | None = None,
               n_iter: int = 64) -> tuple[float, float, bool]:
    """Calibrate one point's distance offset and bandwidth.

    Finds rho (the distance to the local_connectivity-th nearest
    neighbor) and the sigma solving

        sum_j exp(-max(d_j - rho, 0) / sigma) = target

    by bisection, to a residual of at most 1e-5 within n_iter
    iterations.  Targets below the number of neighbors inside rho are
    unattainable; bisection then drives sigma toward zero and the clamp
    floor of 1e-3 times the mean distance takes over.

    Parameters
    ----------
    distances: array of shape (k,)
        Non-decreasing distances to the point's k nearest neighbors.

    local_connectivity: int (optional, default 1)
        The neighbor assumed fully connected; sets rho.

    target: float (optional, default log2(k))
        The desired fuzzy set cardinality.

    n_iter: int (optional, default 64)
        Maximum bisection iterations.

    Returns
    -------
    rho: float
    sigma: float
    clamped: bool
        True when sigma was raised to the clamp floor.
    """
    d = np.asarray(distances, dtype=np.float64)
    k = d.shape[0]
    if k < 1:
        raise ValueError("need at least one neighbor distance")
    if target is None:
        target = math.log2(k)
    rho = float(d[min(local_connectivity, k) - 1])

    lo = 0.0
    hi = math.inf
    mid = 1.0
    for _ in range(n_iter):
        psum = 0.0
        for j in range(k):
            gap = d[j] - rho
            psum += math.exp(-(gap / mid)) if gap > 0.0 else 1.0
        if abs(psum - target) <= SMOOTH_K_TOLERANCE:
            break
        if psum > target:
            hi = mid
            mid = (lo + hi) * 0.5
        else:
            lo = mid
            mid = mid * 2.0 if hi == math.inf else (lo + hi) * 0.5

    sigma = mid
    floor = MIN_K_DIST_SCALE * float(np.mean(d))
    clamped = sigma < floor
    if clamped:
        sigma = floor
    return rho, sigma, clamped


def smooth_knn_batch(distances: np.ndarray, local_connectivity: int = 1
                     ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """smooth_knn for every row of a (P, k) distance matrix."""
    n_points, k = distances.shape
    rho = np.empty(n_points, dtype=np.float64)
    sigma = np.empty(n_points, dtype=np.float64)
    clamped = np.empty(n_points, dtype=bool)
    for i in range(n_points):
        rho[i], sigma[i], clamped[i] = smooth_knn(
            distances[i], local_connectivity=local_connectivity)
    return rho, sigma, clamped


def membership_strengths(graph: NeighborGraph, rho: np.ndarray,
                         sigma: np.ndarray) -> sparse.csr_matrix:
    """Directed membership weights exp(-max(d - rho_i, 0) / sigma_i).

    A neighbor at or inside rho gets weight exactly 1, as does any
    neighbor when sigma is zero.
    """
    n_points, k = graph.indices.shape
    rows = np.repeat(np.arange(n_points, dtype=np.int64), k)
    cols = graph.indices.reshape(-1)
    gaps = graph.distances - rho[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = np.exp(-gaps / sigma[:, None])
    vals[gaps <= 0.0] = 1.0
    vals[np.broadcast_to(sigma[:, None] == 0.0, gaps.shape) & (gaps > 0.0)] = 0.0
    mat = sparse.csr_matrix(
        (vals.reshape(-1), (rows, cols)), shape=(n_points, n_points))
    mat.setdiag(0.0)
    mat.eliminate_zeros()
    return mat


def fuzzy_union(directed: sparse.spmatrix) -> sparse.csr_matrix:
    """Symmetrize directed weights with the probabilistic t-conorm.

    Returns a + a.T - a * a.T elementwise; the result is exactly
    symmetric with all entries in [0, 1] when the input is.
    """
    a = directed.tocsr()
    prod = a.multiply(a.T)
    out = (a + a.T - prod).tocsr()
    out.eliminate_zeros()
    return out


def fuzzy_graph(points: np.ndarray, n_neighbors: int, metric: str = "cosine",
                local_connectivity: int = 1) -> FuzzyGraph:
    """knn_graph -> smooth_knn -> membership -> fuzzy_union, bundled."""
    graph = knn_graph(points, n_neighbors, metric=metric)
    rho, sigma, clamped = smooth_knn_batch(
        graph.distances, local_connectivity=local_connectivity)
    directed = membership_strengths(graph, rho, sigma)
    return FuzzyGraph(weights=fuzzy_union(directed), rho=rho, sigma=sigma,
                      sigma_clamped=clamped)


def _ab_curve_targets(min_dist: float, spread: float,
                      n_samples: int = 300) -> tuple[np.ndarray, np.ndarray]:
    # Sample grid over (0, 3*spread]: d_i = 3*spread*i/n for i = 1..n.
    xv = 3.0 * spread * np.arange(1, n_samples + 1, dtype=np.float64) / n_samples
    yv = np.where(xv <= min_dist, 1.0,
                  np.exp(-(xv - min_dist) / spread))
    return xv, yv


def fit_ab(min_dist: float, spread: float, max_iter: int = 200,
           tol: float = 1e-8) -> tuple[float, float]:
    """Fit the low-dimensional similarity curve parameters a and b.

    Minimizes the squared error between 1 / (1 + a * d^(2b)) and the
    piecewise target (1 below min_dist, exponential decay beyond) over
    300 evenly spaced samples of (0, 3 * spread], using damped
    Gauss-Newton steps from (1, 1).

    Parameters
    ----------
    min_dist: float (positive)
        Distance below which points are considered fully similar.

    spread: float (positive)
        Decay scale of the target curve.

    max_iter: int (optional, default 200)

    tol: float (optional, default 1e-8)
        Parameter-step convergence tolerance.

    Returns
    -------
    a, b: floats

    Raises
    ------
    CurveFitError
        When no converged step is found within max_iter iterations.
    """
    if min_dist <= 0.0 or spread <= 0.0:
        raise ValueError("min_dist and spread must be positive")
    if min_dist >= spread * 10.0:
        raise ValueError(
            f"min_dist ({min_dist}) must be below 10 * spread ({spread * 10.0})")
    xv, yv = _ab_curve_targets(min_dist, spread)
    log_x = np.log(xv)

    def residuals(a: float, b: float) -> np.ndarray:
        return 1.0 / (1.0 + a * xv ** (2.0 * b)) - yv

    a, b = 1.0, 1.0
    r = residuals(a, b)
    sse = float(r @ r)
    damping = 1e-3
    for _ in range(max_iter):
        p = xv ** (2.0 * b)
        denom = (1.0 + a * p) ** 2
        ja = -p / denom
        jb = -2.0 * a * p * log_x / denom
        g = np.array([ja @ r, jb @ r])
        h = np.array([[ja @ ja, ja @ jb], [ja @ jb, jb @ jb]])
        step = None
        for _ in range(32):
            try:
                cand = np.linalg.solve(h + damping * np.eye(2), -g)
            except np.linalg.LinAlgError:
                damping *= 10.0
                continue
            na, nb = a + cand[0], b + cand[1]
            if na <= 0.0 or nb <= 0.0:
                damping *= 10.0
                continue
            nr = residuals(na, nb)
            nsse = float(nr @ nr)
            if nsse <= sse:
                step = cand
                a, b, r, sse = na, nb, nr, nsse
                damping = max(damping * 0.5, 1e-12)
                break
            damping *= 10.0
        if step is None:
            raise CurveFitError("no descent step found", a, b)
        if math.sqrt(float(step @ step)) <= tol:
            return float(a), float(b)
    raise CurveFitError(
        f"no convergence within {max_iter} iterations", a, b)


def _power_iteration(matvec, n: int, deflate: list[np.ndarray],
                     rng, tol: float = 1e-6,
                     max_iter: int = 1000) -> np.ndarray | None:
    """Leading eigenvector of a symmetric PSD operator, orthogonal to
    the deflation set.  Returns None when not converged."""
    x = np.array([rng.uniform() - 0.5 for _ in range(n)], dtype=np.float64)
    for basis in deflate:
        x -= (basis @ x) * basis
    norm = np.linalg.norm(x)
    if norm == 0.0:
        return None
    x /= norm
    for _ in range(max_iter):
        y = matvec(x)
        for basis in deflate:
            y -= (basis @ y) * basis
        norm = np.linalg.norm(y)
        if norm <= 1e-12:
            # Mx vanishes on the deflated subspace: x is already an
            # eigenvector for eigenvalue 0 (the operator is PSD).
            return x
        y /= norm
        lam = float(y @ matvec(y))
        resid = np.linalg.norm(matvec(y) - lam * y)
        x = y
        if resid <= tol * max(1.0, abs(lam)):
            return x
    return None


def initialize_layout(graph: FuzzyGraph, mode: str = "spectral",
                      seed: int = 0) -> np.ndarray:
    """Initial 2-D coordinates for the layout optimizer.

    Spectral mode embeds with the two smallest nontrivial eigenvectors
    of the symmetric normalized graph Laplacian, found by power
    iteration with deflation on the shifted operator
    M = I + D^(-1/2) W D^(-1/2) (largest eigenvectors of M are smallest
    of the Laplacian).  Coordinates are rescaled so the largest
    magnitude is 10.  Any convergence failure, or a graph without
    edges, falls back to the random mode: uniform coordinates in
    [-10, 10]^2 from the seeded generator.

    Parameters
    ----------
    graph: FuzzyGraph

    mode: string (optional, default "spectral")
        Either "spectral" or "random".

    seed: int (optional, default 0)

    Returns
    -------
    coords: array of shape (n_points, 2)
    """
    n = graph.n_points
    if n == 0:
        return np.zeros((0, 2), dtype=np.float64)
    if n == 1:
        return np.zeros((1, 2), dtype=np.float64)
    if mode == "spectral":
        coords = _spectral_coords(graph, seed)
        if coords is not None:
            return coords
    elif mode != "random":
        raise ValueError(f"unknown init mode: {mode!r}")
    rng = _accel.Pcg32(seed, n + 1)
    coords = np.empty((n, 2), dtype=np.float64)
    for i in range(n):
        coords[i, 0] = rng.uniform() * 20.0 - 10.0
        coords[i, 1] = rng.uniform() * 20.0 - 10.0
    return coords


def _spectral_coords(graph: FuzzyGraph, seed: int) -> np.ndarray | None:
    w = graph.weights
    n = w.shape[0]
    deg = np.asarray(w.sum(axis=1)).ravel()
    if not np.any(deg > 0.0):
        return None
    inv_sqrt = np.where(deg > 0.0, 1.0 / np.sqrt(np.where(deg > 0.0, deg, 1.0)), 0.0)
    norm_w = sparse.csr_matrix(w.multiply(inv_sqrt[:, None]).multiply(inv_sqrt[None, :]))

    def matvec(x: np.ndarray) -> np.ndarray:
        return x + norm_w @ x

    # The Laplacian kernel direction D^(1/2) 1 is deflated first; the
    # next two eigenvectors of M supply the coordinates.
    v0 = np.sqrt(deg)
    v0 /= np.linalg.norm(v0)
    rng = _accel.Pcg32(seed, n + 2)
    basis = [v0]
    cols = []
    for _ in range(2):
        vec = _power_iteration(matvec, n, basis, rng)
        if vec is None:
            return None
        basis.append(vec)
        cols.append(vec)
    coords = np.stack(cols, axis=1)
    peak = np.abs(coords).max()
    if peak == 0.0:
        return None
    return coords * (10.0 / peak)


def _edge_arrays(weights: sparse.csr_matrix
                 ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    coo = weights.tocoo()
    mask = coo.data > 0.0
    heads = coo.row[mask].astype(np.int64)
    tails = coo.col[mask].astype(np.int64)
    w = coo.data[mask].astype(np.float64)
    order = np.lexsort((tails, heads))
    return heads[order], tails[order], w[order]


def optimize_layout(graph: FuzzyGraph, init: np.ndarray, a: float, b: float,
                    epochs: int = 500, learning_rate: float = 1.0,
                    negative_samples: int = 5, seed: int = 0) -> np.ndarray:
    """Run the stochastic attract/repel optimization.

    Each directed edge is sampled once every w_max / w epochs
    (epochs-per-sample scheme), attracting its endpoints along the
    fitted similarity curve; every positive sample also repels the head
    from negative_samples random vertices.  Gradient steps are clipped
    to +/-4 per coordinate and the learning rate decays linearly to
    zero.  The PRNG is PCG32 seeded from (seed, point count), and the
    loop is single-threaded, so output is bit-reproducible.

    Parameters
    ----------
    graph: FuzzyGraph
    init: array of shape (n_points, 2)
    a, b: floats
        Curve parameters from fit_ab.
    epochs: int (optional, default 500)
    learning_rate: float (optional, default 1.0)
    negative_samples: int (optional, default 5)
    seed: int (optional, default 0)

    Returns
    -------
    coords: array of shape (n_points, 2)

    Raises
    ------
    LayoutError
        When a coordinate goes non-finite; carries epoch and point.
    """
    if epochs < 1:
        raise ValueError(f"epochs must be >= 1, got {epochs}")
    n = graph.n_points
    init = np.asarray(init, dtype=np.float64).reshape(n, 2)
    heads, tails, w = _edge_arrays(graph.weights)
    if w.shape[0]:
        epochs_per_sample = w.max() / w
    else:
        epochs_per_sample = np.empty(0, dtype=np.float64)
    coords, fail_epoch, fail_point = _accel.optimize_embedding(
        init, heads, tails, epochs_per_sample, float(a), float(b),
        int(epochs), float(learning_rate), int(negative_samples),
        int(seed), n)
    if fail_epoch >= 0:
        raise LayoutError(fail_epoch, fail_point)
    return coords


def umap_project(points: np.ndarray, params: UmapParams | None = None
                 ) -> Projection2D:
    """Project points to 2-D through the full pipeline.

    knn_graph -> smooth_knn -> fuzzy_union -> fit_ab ->
    initialize_layout -> optimize_layout.  Zero points yield an empty
    projection and a single point sits at the origin.

    Parameters
    ----------
    points: array of shape (n_points, n_features)

    params: UmapParams (optional)
        Defaults per UmapParams.

    Returns
    -------
    projection: Projection2D
        Coordinates plus the fully resolved parameter set (including
        the fitted a and b), so any projection can be regenerated.
    """
    if params is None:
        params = UmapParams()
    points = np.asarray(points, dtype=np.float64)
    if points.ndim == 1:
        points = points.reshape(-1, 1)
    n = points.shape[0]
    a, b = fit_ab(params.min_dist, params.spread)
    resolved = {
        "method": "umap",
        "n_neighbors": min(params.n_neighbors, max(n - 1, 1)),
        "min_dist": params.min_dist,
        "spread": params.spread,
        "a": a,
        "b": b,
        "epochs": params.resolve_epochs(n),
        "learning_rate": params.learning_rate,
        "negative_samples": params.negative_samples,
        "metric": params.metric,
        "local_connectivity": params.local_connectivity,
        "init": params.init,
        "seed": params.seed,
    }
    if n == 0:
        return Projection2D(np.zeros((0, 2), dtype=np.float64), resolved)
    if n == 1:
        return Projection2D(np.zeros((1, 2), dtype=np.float64), resolved)
    graph = fuzzy_graph(points, resolved["n_neighbors"], metric=params.metric,
                        local_connectivity=params.local_connectivity)
    init = initialize_layout(graph, mode=params.init, seed=params.seed)
    coords = optimize_layout(
        graph, init, a, b, epochs=resolved["epochs"],
        learning_rate=params.learning_rate,
        negative_samples=params.negative_samples, seed=params.seed)
    return Projection2D(coords, resolved)


def pca_project(points: np.ndarray) -> Projection2D:
    """Deterministic 2-D PCA projection.

    Mean-centers and projects onto the top two right singular
    directions.  Sign convention: the largest-magnitude loading of each
    component is positive, which fixes the reflection ambiguity.

    Parameters
    ----------
    points: array of shape (n_points, n_features)

    Returns
    -------
    projection: Projection2D
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim == 1:
        points = points.reshape(-1, 1)
    n = points.shape[0]
    params = {"method": "pca"}
    if n == 0:
        return Projection2D(np.zeros((0, 2), dtype=np.float64), params)
    if n == 1:
        return Projection2D(np.zeros((1, 2), dtype=np.float64), params)
    centered = points - points.mean(axis=0)
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    coords = np.zeros((n, 2), dtype=np.float64)
    for c in range(min(2, vt.shape[0])):
        comp = vt[c]
        pivot = int(np.argmax(np.abs(comp)))
        if comp[pivot] < 0.0:
            comp = -comp
        coords[:, c] = centered @ comp
    return Projection2D(coords, params)
