"""Dense brute-force reference implementation for small chains.

Everything here works on explicit ``2^L``-dimensional state vectors in the
fermionic Fock basis (site 0 is the least significant bit) with operators
built through the Jordan-Wigner strings.  It exists to validate the
momentum-space machinery: exact non-unitary evolution, projective jumps,
reduced-density-matrix entropies and Majorana correlators.

Conventions match the momentum-space blocks: the pairing term enters with
the sign that produces ``b(k) = +2iJ sin k`` (Ising) and ``+iJ g_d(k)``
(Kitaev); this is the ``c -> ic`` gauge of the usual nearest-neighbour
form and leaves spectra, occupations and entropies unchanged.  The second
Majorana is ``m_{2l} = -i(c^dag_l - c_l)``, the sign fixed by requiring
``m^2 = 1`` and the canonical anticommutation relations.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import ResourceError, SimulationError
from .model import ModelKind, ModelParams

_MAX_DENSE_L = 12


def _check_size(L: int) -> None:
    if L > _MAX_DENSE_L:
        raise ResourceError(f"dense oracle is limited to L <= {_MAX_DENSE_L}, got L={L}")


def jordan_wigner_annihilators(L: int) -> list[np.ndarray]:
    """Dense matrices of ``c_0 .. c_{L-1}`` with site 0 least significant."""
    _check_size(L)
    lower = np.array([[0.0, 1.0], [0.0, 0.0]])  # maps |1> to |0>
    z = np.diag([1.0, -1.0])
    eye = np.eye(2)
    ops = []
    for j in range(L):
        mat = np.array([[1.0]])
        for site in range(L - 1, -1, -1):
            if site > j:
                factor = eye
            elif site == j:
                factor = lower
            else:
                factor = z
            mat = np.kron(mat, factor)
        ops.append(mat.astype(complex))
    return ops


def majorana_operators(L: int) -> list[np.ndarray]:
    """Dense Majorana matrices in interleaved order: (site 0 odd, site 0 even, ...)."""
    cs = jordan_wigner_annihilators(L)
    ops = []
    for c in cs:
        cd = c.conj().T
        ops.append(cd + c)
        ops.append(-1j * (cd - c))
    return ops


def build_dense_hamiltonian(params: ModelParams) -> np.ndarray:
    """Real-space non-Hermitian Hamiltonian on the full Fock space.

    Antiperiodic boundary condition: any bond crossing the L-1 -> 0 seam
    carries an extra minus sign (``c_{i+L} = -c_i``).  The long-range
    pairing weight is ``1/min(r, L-r)^d`` over all distances ``r``.
    """
    _check_size(params.L)
    L, J, h, gamma = params.L, params.J, params.h, params.gamma
    cs = jordan_wigner_annihilators(L)
    cds = [c.conj().T for c in cs]
    dim = 2**L
    H = np.zeros((dim, dim), dtype=complex)
    boundary = -1.0  # ABC seam sign

    def wrap(i: int) -> tuple[int, float]:
        return (i % L, boundary if i >= L else 1.0)

    for i in range(L):
        j, sgn = wrap(i + 1)
        H -= J * sgn * (cds[i] @ cs[j] + cds[j] @ cs[i])
    if params.kind is ModelKind.ISING:
        for i in range(L):
            j, sgn = wrap(i + 1)
            H += J * sgn * (cds[i] @ cds[j] + cs[j] @ cs[i])
    else:
        for i in range(L):
            for r in range(1, L):
                j, sgn = wrap(i + r)
                weight = 1.0 / min(r, L - r) ** params.d
                H += 0.5 * J * weight * sgn * (cds[i] @ cds[j] + cs[j] @ cs[i])
    number_term = sum(cds[i] @ cs[i] for i in range(L))
    H -= (h + 0.25j * gamma) * (L * np.eye(dim) - 2.0 * number_term)
    return H


def fock_vacuum(L: int) -> np.ndarray:
    """The empty Fock state ``|0...0>``."""
    psi = np.zeros(2**L, dtype=complex)
    psi[0] = 1.0
    return psi


def dense_vacuum(H: np.ndarray, im_tol: float = 1e-9) -> np.ndarray:
    """Quasiparticle vacuum = eigenvector with the largest imaginary eigenvalue.

    At an exact resonance several eigenvalues share the maximal imaginary
    part (the vacuum, the resonant pair and single-quasiparticle states);
    the tie is broken toward the smallest real part, which is the vacuum.
    """
    evals, vecs = np.linalg.eig(H)
    top = np.max(evals.imag)
    tied = np.where(evals.imag >= top - im_tol * max(1.0, abs(top)))[0]
    pick = tied[np.argmin(evals.real[tied])]
    v = vecs[:, pick]
    return v / np.linalg.norm(v)


def evolve_normalized(
    psi: np.ndarray, H: np.ndarray, t: float, max_step: float | None = None
) -> np.ndarray:
    """Apply ``exp(-i H t)`` and renormalize.

    The propagation is split into sub-steps short enough that the norm
    stays within floating-point range, each applied with the dense
    scaled-and-squared exponential and followed by renormalization.
    """
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    if t == 0:
        return psi / np.linalg.norm(psi)
    growth = float(np.max(np.abs(H.imag).sum(axis=1))) + 1e-12
    step = max_step if max_step is not None else min(t, 40.0 / growth)
    n_steps = max(1, int(np.ceil(t / step)))
    dt = t / n_steps
    U = scipy.linalg.expm(-1j * H * dt)
    out = psi.astype(complex)
    for _ in range(n_steps):
        out = U @ out
        nrm = np.linalg.norm(out)
        if nrm < 1e-280:
            raise SimulationError(
                "state norm underflowed during evolution; use a shorter time"
            )
        out = out / nrm
    return out


def apply_projection(psi: np.ndarray, site: int) -> np.ndarray:
    """Project onto an empty site, ``(1 - n_site) psi / ||...||``.

    Raises
    ------
    SimulationError
        If the site is occupied with probability one.
    """
    L = int(np.log2(len(psi)))
    mask = (np.arange(len(psi)) >> site) & 1
    out = psi.copy()
    out[mask == 1] = 0.0
    nrm = np.linalg.norm(out)
    if nrm < 1e-12:
        raise SimulationError(f"projection onto empty site {site} annihilates the state")
    return out / nrm


def parity_expectation(psi: np.ndarray) -> float:
    """Expectation of the fermion parity ``prod (1 - 2 n_j)``."""
    idx = np.arange(len(psi))
    signs = 1.0 - 2.0 * (np.bitwise_count(idx) % 2)
    return float(np.real(np.vdot(psi, signs * psi)))


def _fermionic_swap(tensor: np.ndarray, axis: int) -> np.ndarray:
    """Swap adjacent fermionic modes ``axis`` and ``axis+1`` (sign on 11)."""
    tensor = np.swapaxes(tensor, axis, axis + 1)
    sl = [slice(None)] * tensor.ndim
    sl[axis] = 1
    sl[axis + 1] = 1
    tensor = tensor.copy()
    tensor[tuple(sl)] *= -1.0
    return tensor


def reduced_entropy(psi: np.ndarray, window: tuple[int, int]) -> float:
    """Von Neumann entropy (nats) of contiguous fermionic modes.

    The window modes are commuted to the front with fermionic swaps (a
    minus sign whenever two occupied modes exchange), after which the
    ordinary partial trace over the remaining modes is taken.
    """
    offset, ell = window
    L = int(np.log2(len(psi)))
    if not 0 <= offset < L or ell < 1 or offset + ell > L:
        raise ValueError(f"invalid window {window} for L={L}")
    tensor = psi.reshape([2] * L)
    # reshape axis 0 is the most significant bit = site L-1; flip to site order
    tensor = np.transpose(tensor, axes=list(range(L - 1, -1, -1)))
    for target in range(ell):
        for axis in range(offset + target - 1, target - 1, -1):
            tensor = _fermionic_swap(tensor, axis)
    rho_block = tensor.reshape(2**ell, 2 ** (L - ell))
    svals = np.linalg.svd(rho_block, compute_uv=False)
    probs = svals**2
    probs = probs[probs > 1e-14]
    probs = probs / probs.sum()
    return float(-np.sum(probs * np.log(probs)))


def majorana_expectation(psi: np.ndarray, m: int, n: int) -> complex:
    """Exact normalized Majorana correlator ``<m_m m_n>`` (0-based indices)."""
    L = int(np.log2(len(psi)))
    ops = majorana_operators(L)
    if not (0 <= m < 2 * L and 0 <= n < 2 * L):
        raise ValueError(f"Majorana indices out of range for L={L}")
    val = np.vdot(psi, ops[m] @ (ops[n] @ psi)) / np.vdot(psi, psi)
    return complex(val)


def majorana_matrix(psi: np.ndarray) -> np.ndarray:
    """Full ``2L x 2L`` Majorana correlation matrix of a dense state."""
    L = int(np.log2(len(psi)))
    ops = majorana_operators(L)
    applied = [op @ psi for op in ops]
    nrm = np.vdot(psi, psi)
    M = np.empty((2 * L, 2 * L), dtype=complex)
    for i, op in enumerate(ops):
        left = op.conj().T @ psi  # ops are Hermitian, kept explicit
        for j in range(2 * L):
            M[i, j] = np.vdot(left, applied[j]) / nrm
    return M
