"""Assembly of the 16x16 one-step superoperator, its parity block
structure, CPTP diagnostics, and the factored characteristic polynomials
of the 8x8 parity blocks in the integrable theta = 0 case.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as la

from .config import DEFAULT_TOLS, Tolerances
from .gates import GateSet, ParameterPoint, SIGMA_ZZ, build_gate_set
from .linalg import devectorize, eig_general, kron, vectorize


class SymmetryViolationError(RuntimeError):
    """The superoperator does not commute with the parity projectors."""


class UnsupportedRegimeError(ValueError):
    """Closed-form results are only available for theta = 0, easy plane."""


# Parity of the vectorized basis element |i><j| is the sign of
# (sigma_z x sigma_z)_{ii} (sigma_z x sigma_z)_{jj}; the even/odd index lists
# below are fixed by the diagonal of kron(SIGMA_ZZ, SIGMA_ZZ).
_PARITY_DIAG = np.diag(np.kron(SIGMA_ZZ, SIGMA_ZZ)).real
EVEN_INDICES = tuple(int(i) for i in np.flatnonzero(_PARITY_DIAG > 0))
ODD_INDICES = tuple(int(i) for i in np.flatnonzero(_PARITY_DIAG < 0))


def parity_projectors():
    """The complementary projectors (1/2)(I16 +/- sigma_zz x sigma_zz)."""
    P = np.kron(SIGMA_ZZ, SIGMA_ZZ)
    I16 = np.eye(16, dtype=complex)
    return (I16 + P) / 2, (I16 - P) / 2


@dataclass(frozen=True)
class Superoperator:
    """One full brickwork step acting on vectorized 4x4 operators."""

    matrix: np.ndarray           # 16x16
    point: ParameterPoint
    gates: GateSet
    tau_plus: np.ndarray         # 8x8 even-parity block
    tau_minus: np.ndarray        # 8x8 odd-parity block
    even_indices: tuple[int, ...]
    odd_indices: tuple[int, ...]
    cptp_guaranteed: bool        # coupling gate passed the unitarity check


def apply_step(g: GateSet, rho: np.ndarray) -> np.ndarray:
    """Direct one-step action U (sum_j (K_j x V) rho (K_j x V)^dag) U^dag.

    Independent of the vectorized route; used as its cross-check.
    """
    out = np.zeros((4, 4), dtype=complex)
    for K in (g.K1, g.K2):
        M = kron(K, g.V)
        out += M @ rho @ M.conj().T
    return g.U @ out @ g.U.conj().T


def block_reduce(matrix: np.ndarray, tols: Tolerances = DEFAULT_TOLS):
    """Split a parity-symmetric 16x16 map into its two 8x8 blocks.

    Returns (tau_plus, tau_minus, even_indices, odd_indices).  Raises
    SymmetryViolationError if the map does not commute with the parity
    projectors (e.g. a local gate not commuting with sigma_z).
    """
    qp, qm = parity_projectors()
    scale = max(1.0, np.abs(matrix).max())
    comm = max(np.abs(qp @ matrix - matrix @ qp).max(),
               np.abs(qm @ matrix - matrix @ qm).max())
    if comm > tols.parity_commutator * scale:
        raise SymmetryViolationError(
            f"parity commutator {comm:.3e} exceeds tolerance {tols.parity_commutator:.1e}"
        )
    tau_plus = matrix[np.ix_(EVEN_INDICES, EVEN_INDICES)]
    tau_minus = matrix[np.ix_(ODD_INDICES, ODD_INDICES)]
    return tau_plus, tau_minus, EVEN_INDICES, ODD_INDICES


def embed_blocks(tau_plus: np.ndarray, tau_minus: np.ndarray) -> np.ndarray:
    """Lift the two parity blocks back into the 16-dimensional space."""
    T = np.zeros((16, 16), dtype=complex)
    T[np.ix_(EVEN_INDICES, EVEN_INDICES)] = tau_plus
    T[np.ix_(ODD_INDICES, ODD_INDICES)] = tau_minus
    return T


def build_superoperator(g: GateSet, tols: Tolerances = DEFAULT_TOLS) -> Superoperator:
    """Assemble T = (U x U^*) sum_j (K_j x V) x (K_j x V)^* and block-split it."""
    T = np.zeros((16, 16), dtype=complex)
    for K in (g.K1, g.K2):
        M = kron(K, g.V)
        T += kron(M, M.conj())
    T = kron(g.U, g.U.conj()) @ T
    tau_plus, tau_minus, even, odd = block_reduce(T, tols)
    return Superoperator(
        matrix=T, point=g.point, gates=g,
        tau_plus=tau_plus, tau_minus=tau_minus,
        even_indices=even, odd_indices=odd,
        cptp_guaranteed=g.unitary,
    )


def superoperator_at(point: ParameterPoint, tols: Tolerances = DEFAULT_TOLS) -> Superoperator:
    """Convenience: gates plus superoperator in one call."""
    return build_superoperator(build_gate_set(point, tols), tols)


def trace_preservation_defect(matrix: np.ndarray) -> float:
    """How far the trace functional is from being a left fixed point of the map."""
    tr = vectorize(np.eye(4))
    return float(np.abs(matrix.T @ tr - tr).max())


def choi_matrix(matrix: np.ndarray) -> np.ndarray:
    """Choi matrix sum_ij |i><j| x E(|i><j|) of the 4-dim channel E."""
    J = np.zeros((16, 16), dtype=complex)
    for i in range(4):
        for j in range(4):
            Eij = np.zeros((4, 4), dtype=complex)
            Eij[i, j] = 1.0
            J += np.kron(Eij, devectorize(matrix @ vectorize(Eij)))
    return J


def choi_min_eigenvalue(matrix: np.ndarray) -> float:
    """Smallest eigenvalue of the Hermitized Choi matrix (>= 0 for a CP map)."""
    J = choi_matrix(matrix)
    return float(la.eigvalsh((J + J.conj().T) / 2).min())


def steady_state(s: Superoperator, tols: Tolerances = DEFAULT_TOLS) -> np.ndarray:
    """Density matrix fixed by the step: the unit-eigenvalue right eigenvector."""
    es = eig_general(s.matrix, tols)
    j = int(np.argmin(np.abs(es.eigenvalues - 1.0)))
    if abs(es.eigenvalues[j] - 1.0) > 1e-8:
        raise RuntimeError(f"no eigenvalue close to 1: nearest is {es.eigenvalues[j]}")
    rho = devectorize(es.right[:, j])
    rho = rho / np.trace(rho)
    herm_defect = np.abs(rho - rho.conj().T).max()
    if herm_defect > 1e-9:
        raise RuntimeError(f"steady state Hermiticity defect {herm_defect:.2e}")
    return (rho + rho.conj().T) / 2


# ---------------------------------------------------------------------------
# closed-form characteristic data of the parity blocks (theta = 0)
# ---------------------------------------------------------------------------

def pair_sum_coeff(q: complex, epsilon: float) -> complex:
    """(q^2 - 1)(eps + 1); times lambda over a block denominator it is the
    sum of each square-root eigenvalue pair."""
    return (q * q - 1.0) * (epsilon + 1.0)


def pair_splitting_sqrt(lam: complex, q: complex, epsilon: float) -> complex:
    """Principal square root controlling every pairwise eigenvalue splitting.

    The radicand factors as lam^2 q^2 A with A the real easy-plane
    discriminant, so this vanishes exactly on the EP manifold.
    """
    radicand = (lam**2 * (epsilon - 1.0) ** 2 * (q**4 + 1.0)
                + 2.0 * q**2 * (2.0 * lam**4 * epsilon
                                - lam**2 * (epsilon + 1.0) ** 2
                                + 2.0 * epsilon))
    return np.sqrt(complex(radicand))


def even_quad_linear_coeff(lam: complex, q: complex, epsilon: float) -> complex:
    """Linear coefficient xi of the even-block quadratic mu^2 + xi mu + eps^2."""
    num = (lam**2 * q**4 * (epsilon**2 + 1.0)
           + 2.0 * q**2 * (lam**4 * epsilon - lam**2 * (epsilon + 1.0) ** 2 + epsilon)
           + lam**2 * (epsilon**2 + 1.0))
    return num / ((lam**2 - q**2) * (lam**2 * q**2 - 1.0))


def odd_sector_quadratics(lam: complex, q: complex, epsilon: float):
    """The four monic quadratics whose roots are the odd-block eigenvalues.

    Each is the characteristic polynomial of one 2x2 sub-block; the second
    and fourth are the first and third with mu -> mu/eps rescaled, so their
    roots are eps times the others'.  Returned as (1, c1, c0) coefficient
    triples.
    """
    f = pair_sum_coeff(q, epsilon)
    dp = q * q - lam * lam
    dm = lam * lam * q * q - 1.0
    P1 = (1.0, f * lam / (lam * lam - q * q), epsilon * dm / dp)
    P2 = (1.0, epsilon * f * lam / (lam * lam - q * q), epsilon**3 * dm / dp)
    P3 = (1.0, f * lam / (1.0 - lam * lam * q * q), epsilon * dp / dm)
    P4 = (1.0, epsilon * f * lam / (1.0 - lam * lam * q * q), epsilon**3 * dp / dm)
    return P1, P2, P3, P4


def _poly_eval(coeffs, mu: complex) -> complex:
    out = 0.0 + 0.0j
    for c in coeffs:
        out = out * mu + c
    return out


@dataclass(frozen=True)
class CharFactorReport:
    """Factored characteristic polynomial of one parity block, checked
    against that block's numerical eigenvalues."""

    sector: str
    factors: tuple[tuple[complex, ...], ...]   # monic coefficient tuples, highest power first
    eigenvalues: np.ndarray                    # numerical eigenvalues of the block
    assignments: tuple[int, ...]               # factor index annihilating each eigenvalue
    max_residual: float                        # max over eigenvalues of min_k |P_k(mu)|
    rescale_defect: float                      # root rescaling relation (odd sector), else 0.0


def factored_char_poly(tau: np.ndarray, point: ParameterPoint, sector: str,
                       tols: Tolerances = DEFAULT_TOLS) -> CharFactorReport:
    """Verify the closed-form factorization of one 8x8 parity block.

    Even sector: (mu-1)(mu-eps^2)(mu-eps)^2 * (mu-eps)^2 (mu^2 + xi mu + eps^2).
    Odd sector: the four quadratics of `odd_sector_quadratics`, with the
    rescaling relation roots(P2) = eps * roots(P1), roots(P4) = eps * roots(P3).
    """
    if abs(point.theta) > 1e-14:
        raise UnsupportedRegimeError("closed-form factorization requires theta = 0")
    lam, q, eps = point.lam, point.q, point.epsilon
    if sector == "even":
        xi = even_quad_linear_coeff(lam, q, eps)
        factors = ((1.0, -1.0), (1.0, -eps**2), (1.0, -eps), (1.0, -eps),
                   (1.0, -eps), (1.0, -eps), (1.0, xi, eps**2))
        capacity = [1, 1, 1, 1, 1, 1, 2]
        rescale_defect = 0.0
    elif sector == "odd":
        P1, P2, P3, P4 = odd_sector_quadratics(lam, q, eps)
        factors = (P1, P2, P3, P4)
        capacity = [2, 2, 2, 2]
        r1 = np.roots(P1)
        r2 = np.roots(P2)
        r3 = np.roots(P3)
        r4 = np.roots(P4)
        d12 = _set_distance(r2, eps * r1)
        d34 = _set_distance(r4, eps * r3)
        rescale_defect = max(d12, d34)
    else:
        raise ValueError(f"sector must be 'even' or 'odd', got {sector!r}")

    evals = la.eigvals(np.asarray(tau, dtype=complex))
    remaining = list(capacity)
    assignments = []
    max_residual = 0.0
    for mu in evals:
        vals = [abs(_poly_eval(f, mu)) if remaining[k] > 0 else np.inf
                for k, f in enumerate(factors)]
        k = int(np.argmin(vals))
        remaining[k] -= 1
        assignments.append(k)
        max_residual = max(max_residual, float(vals[k]))
    return CharFactorReport(
        sector=sector,
        factors=factors,
        eigenvalues=evals,
        assignments=tuple(assignments),
        max_residual=max_residual,
        rescale_defect=float(rescale_defect),
    )


def _set_distance(xs, ys) -> float:
    xs = sorted(np.asarray(xs, dtype=complex), key=lambda z: (z.real, z.imag))
    ys = sorted(np.asarray(ys, dtype=complex), key=lambda z: (z.real, z.imag))
    return max(abs(x - y) for x, y in zip(xs, ys))
