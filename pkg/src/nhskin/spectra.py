"""Dense non-normal eigenproblems and real-space localization diagnostics.

Right eigenvectors come from the matrix itself, left eigenvectors from
its conjugate transpose; the two sets are matched by eigenvalue
proximity and rescaled so that left_i . right_j = delta_ij.  Numerically
degenerate eigenvalue clusters are handled as a block: the left rows are
recomputed by a small linear solve, and the cluster basis is rotated to
diagonalize the site-position observable, which deterministically
separates end-localized partners (a pair of zero modes otherwise comes
out of the solver as arbitrary mixtures of the two ends).

Localization is quantified per state by the site density folded over
internal components, its center of mass, the weight in the outermost
sites, and the participation ratio.  The skin diagnostic aggregates the
center-of-mass displacements of bulk states; both the signed mean and
the mean magnitude are reported, the latter because the doubled chain
piles states on *both* ends when its reflection symmetry is broken (the
two internal components have opposite hopping asymmetry), which a
signed mean cancels to zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    ConfigError,
    ConvergenceFailure,
    DegenerateAmbiguity,
    DimMismatch,
    NoBulkStates,
    RefOnCurve,
    ZeroVector,
)
from .model import ModelSpec, PBC, build_bdg, validate_spec

CLUSTER_TOL = 1e-10
DEFAULT_EDGE_SITES = 10
DEFAULT_EDGE_WEIGHT = 0.9
DEFAULT_TAU_SKIN = 0.25
ZERO_MODE_RTOL = 1e-8


@dataclass
class EigenSystem:
    """Eigenvalues with matched right (columns) and left (rows) vectors."""

    values: np.ndarray
    right: np.ndarray
    left: np.ndarray
    pairing_residual: float

    @property
    def dim(self) -> int:
        return len(self.values)


@dataclass
class DensityProfile:
    site_density: np.ndarray
    center_of_mass: float
    participation_ratio: float

    def edge_weight(self, ell: int) -> float:
        L = len(self.site_density)
        return float(self.site_density[:ell].sum() + self.site_density[L - ell:].sum())


@dataclass
class StateRecord:
    index: int
    energy: complex
    center_of_mass: float
    edge_weight: float
    participation_ratio: float
    label: str  # "bulk" or "edge"


@dataclass
class SkinReport:
    per_state: list[StateRecord]
    skew: float
    accumulation: float
    skin_detected: bool
    tau_skin: float


def _connected_clusters(values: np.ndarray, tol: float) -> list[np.ndarray]:
    n = len(values)
    adj = np.abs(values[:, None] - values[None, :]) < tol
    comp = -np.ones(n, dtype=int)
    nc = 0
    for s in range(n):
        if comp[s] >= 0:
            continue
        stack = [s]
        comp[s] = nc
        while stack:
            k = stack.pop()
            for m in np.nonzero(adj[k])[0]:
                if comp[m] < 0:
                    comp[m] = nc
                    stack.append(m)
        nc += 1
    return [np.nonzero(comp == c)[0] for c in range(nc)]


def eigendecompose(H: np.ndarray, num_sites: int | None = None,
                   cluster_tol: float = CLUSTER_TOL) -> EigenSystem:
    """Full biorthogonal eigensystem of a dense matrix.

    Parameters
    ----------
    H : square complex matrix with finite entries
    num_sites : number of lattice sites L when H is the doubled 2L x 2L
        matrix; used to fold the position observable that disentangles
        degenerate clusters.  None treats each matrix index as a site.
    cluster_tol : eigenvalues closer than this are handled as one
        degenerate cluster.

    Raises
    ------
    ConvergenceFailure : solver failure, or a left/right pair whose
        overlap underflowed to zero.
    DegenerateAmbiguity : a degenerate cluster whose left/right overlap
        block is numerically singular (defective matrix); pairing inside
        such a cluster has no meaningful resolution and is reported
        rather than guessed.
    """
    N = H.shape[0]
    if H.shape[0] != H.shape[1]:
        raise ConvergenceFailure(f"matrix is not square: {H.shape}")
    if not np.isfinite(H).all():
        raise ConvergenceFailure("matrix has non-finite entries")
    try:
        w, VR = np.linalg.eig(H)
        wl, WL = np.linalg.eig(H.conj().T)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc

    # Greedy best-match-first assignment of left to right eigenvalues.
    lvals = np.conj(wl)
    D = np.abs(w[:, None] - lvals[None, :])
    order = np.unravel_index(np.argsort(D, axis=None), D.shape)
    rmatch = -np.ones(N, dtype=int)
    lused = np.zeros(N, dtype=bool)
    pairing_residual = 0.0
    assigned = 0
    for a, b in zip(*order):
        if rmatch[a] >= 0 or lused[b]:
            continue
        rmatch[a] = b
        lused[b] = True
        pairing_residual = max(pairing_residual, float(D[a, b]))
        assigned += 1
        if assigned == N:
            break
    left = WL[:, rmatch].conj().T
    right = VR.copy()

    if num_sites is not None and 2 * num_sites == N:
        pos = np.concatenate([np.arange(1, num_sites + 1)] * 2).astype(float)
    else:
        pos = np.arange(1, N + 1, dtype=float)

    for idx in _connected_clusters(w, cluster_tol):
        if len(idx) == 1:
            i = idx[0]
            ov = left[i] @ right[:, i]
            if ov == 0.0:
                raise ConvergenceFailure(
                    f"left/right overlap underflowed for eigenvalue {w[i]}"
                )
            left[i] = left[i] / ov
            continue
        Rc = right[:, idx]
        Wc = left[idx, :]
        M = Wc @ Rc
        # the solver returns unit-norm vectors, so a healthy cluster has an
        # O(1) left/right overlap block; a defective one collapses it
        if not np.isfinite(M).all() or np.linalg.svd(M, compute_uv=False)[-1] < 1e-8:
            raise DegenerateAmbiguity(
                f"defective cluster of {len(idx)} eigenvalues near {w[idx[0]]}"
            )
        Lc = np.linalg.solve(M, Wc)
        # canonical basis inside the cluster: diagonalize the position
        # observable, then order members left to right along the chain
        Xc = Lc @ (pos[:, None] * Rc)
        mu, G = np.linalg.eig(Xc)
        if np.linalg.cond(G) > 1e12:
            raise DegenerateAmbiguity(
                f"cluster near {w[idx[0]]} cannot be split by position"
            )
        sort = np.argsort(mu.real)
        G = G[:, sort]
        Rc = Rc @ G
        Lc = np.linalg.solve(G, Lc)
        diag = np.einsum("ij,ji->i", Lc, Rc)
        if np.any(diag == 0.0):
            raise DegenerateAmbiguity(f"cluster near {w[idx[0]]} lost biorthogonality")
        Lc = Lc / diag[:, None]
        right[:, idx] = Rc
        left[idx, :] = Lc

    return EigenSystem(values=w, right=right, left=left,
                       pairing_residual=pairing_residual)


def density_profile(state: np.ndarray, num_sites: int) -> DensityProfile:
    """Per-site density of a state vector, folded over internal components.

    Accepts a bare L-vector or a doubled 2L-vector whose halves are the
    two internal components of each site.
    """
    v = np.asarray(state).ravel()
    if len(v) == 2 * num_sites:
        rho = np.abs(v[:num_sites]) ** 2 + np.abs(v[num_sites:]) ** 2
    elif len(v) == num_sites:
        rho = np.abs(v) ** 2
    else:
        raise DimMismatch(f"vector length {len(v)} does not match {num_sites} sites")
    total = rho.sum()
    if total <= 0.0 or not np.isfinite(total):
        raise ZeroVector("state vector has zero or non-finite norm")
    rho = rho / total
    sites = np.arange(1, num_sites + 1)
    com = float((sites * rho).sum())
    pr = float(1.0 / (rho ** 2).sum())
    return DensityProfile(site_density=rho, center_of_mass=com,
                          participation_ratio=pr)


def classify_states(es: EigenSystem, num_sites: int,
                    ell: int = DEFAULT_EDGE_SITES,
                    w_edge: float = DEFAULT_EDGE_WEIGHT) -> list[StateRecord]:
    """Label each state "edge" when its outer-ell-site weight exceeds w_edge."""
    if not (1 <= ell <= num_sites // 2):
        raise ConfigError(f"ell must lie in [1, L/2], got {ell}")
    out = []
    for i in range(es.dim):
        prof = density_profile(es.right[:, i], num_sites)
        ew = prof.edge_weight(ell)
        out.append(StateRecord(
            index=i,
            energy=complex(es.values[i]),
            center_of_mass=prof.center_of_mass,
            edge_weight=ew,
            participation_ratio=prof.participation_ratio,
            label="edge" if ew > w_edge else "bulk",
        ))
    return out


def skin_metrics(es: EigenSystem, num_sites: int,
                 tau_skin: float = DEFAULT_TAU_SKIN,
                 ell: int = DEFAULT_EDGE_SITES,
                 w_edge: float = DEFAULT_EDGE_WEIGHT,
                 zero_mode_rtol: float = ZERO_MODE_RTOL) -> SkinReport:
    """Aggregate skin diagnostic over the bulk states.

    Topological end modes are excluded from the bulk set: a state counts
    as one when it is edge-localized *and* its energy sits at zero within
    zero_mode_rtol relative to the spectral radius (end modes of the
    doubled chain are zero modes; skin-localized bulk states are not).
    skew is the signed mean of (com - center)/(L/2) over bulk states,
    accumulation the mean magnitude; detection uses the magnitude since
    symmetry-broken chains pile states on both ends at once.
    """
    if not (0.0 < tau_skin < 1.0):
        raise ConfigError(f"tau_skin must lie in (0, 1), got {tau_skin}")
    records = classify_states(es, num_sites, ell, w_edge)
    scale = max(np.abs(es.values).max(), 1e-300)
    center = (num_sites + 1) / 2.0
    half = num_sites / 2.0
    disp = []
    for rec in records:
        topological = rec.label == "edge" and abs(rec.energy) <= zero_mode_rtol * scale
        if not topological:
            disp.append((rec.center_of_mass - center) / half)
    if not disp:
        raise NoBulkStates("all states were classified as topological end modes")
    disp = np.array(disp)
    skew = float(disp.mean())
    accumulation = float(np.abs(disp).mean())
    return SkinReport(
        per_state=records,
        skew=skew,
        accumulation=accumulation,
        skin_detected=bool(accumulation > tau_skin),
        tau_skin=tau_skin,
    )


def pbc_spectrum(spec: ModelSpec) -> np.ndarray:
    """Eigenvalues of the closed ring, ordered by (Re, Im)."""
    validate_spec(spec)
    if spec.boundary != PBC:
        raise ConfigError("pbc_spectrum requires boundary='pbc'")
    vals = np.linalg.eigvals(build_bdg(spec))
    order = np.lexsort((vals.imag, vals.real))
    return vals[order]


def spectral_winding(curve: np.ndarray, e_ref: complex) -> int:
    """Integer winding of a closed spectral curve around a reference energy.

    The first point is appended to close the loop; the winding is the
    accumulated argument increment of (E - e_ref) divided by 2 pi.
    """
    z = np.asarray(curve, dtype=complex) - complex(e_ref)
    if np.abs(z).min() <= 1e-9:
        raise RefOnCurve("reference energy lies on the curve")
    zc = np.append(z, z[0])
    incr = np.angle(zc[1:] / zc[:-1])
    total = incr.sum() / (2.0 * np.pi)
    return int(np.round(total))


def set_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Greedy matched distance between two equal-size complex multisets."""
    a = np.asarray(a, dtype=complex)
    rem = list(np.asarray(b, dtype=complex))
    worst = 0.0
    for x in a:
        d = np.abs(np.array(rem) - x)
        k = int(np.argmin(d))
        worst = max(worst, float(d[k]))
        rem.pop(k)
    return worst


def negation_distance(values: np.ndarray) -> float:
    """How far the spectrum is from its own negation (particle-hole test)."""
    return set_distance(values, -np.asarray(values))
