"""Steady states of the no-click evolution and their Majorana correlations.

The normalized no-click evolution drives every momentum pair ``(k, -k)``
into the local quasiparticle vacuum, except a resonant pair ``(q, -q)``
whose energy is real.  The long-time state is therefore

    |psi> = A |0>  +  e^{i phi} B |q, -q>,

where ``|0>`` is the right vacuum of the non-Hermitian quasiparticles and
``|q, -q>`` carries one excited pair.  Within each pair sector the even
subspace is two-dimensional, spanned by the empty state and the doubly
occupied state ``c^dag_k c^dag_{-k} |0_c>``; in that basis

    vacuum sector :  (alpha_w, beta_w) = u * (1, -(lam - a)/b*)
    excited pair  :  (alpha_e, beta_e) = -u * ((lam - a)/b, 1)

both unit-normalized but *not* orthogonal: their overlap
``T = -2i Im(lam - a) u^2 / b`` generates all the interference terms of the
correlation functions.  Because the superposition lives inside a single
sector, |psi> remains a Gaussian state and is fully characterized by the
Majorana correlation matrix ``M_mn = <psi| m_m m_n |psi> / <psi|psi>`` with
``m_{2l-1} = c^dag_l + c_l`` and ``m_{2l} = -i(c^dag_l - c_l)``.

Two independent evaluation routes are provided: the production route sums
per-mode correlators (occupation and anomalous averages) over the grid,
while :func:`majorana_correlation` with ``method="blocks"`` re-derives the
same matrix from explicit closed-form block formulas.  Both are validated
against a dense brute-force oracle in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidStateError, ZeroOverlapError
from .model import (
    BoundaryCondition,
    ModelParams,
    ModeTable,
    critical_gamma,
    has_resonant_momentum,
    mode_table,
)

_METHODS = ("mode-sum", "blocks")


@dataclass(frozen=True)
class SteadyState:
    """Amplitudes of ``A |0> + e^{i phi} B |q, -q>``.

    ``A`` and ``B`` need not be normalized; every correlation formula
    divides by the explicit state norm.  ``qstar is None`` forces ``B = 0``.
    """

    A: complex
    B: complex
    phi: float = 0.0
    qstar: float | None = None

    def __post_init__(self) -> None:
        if self.qstar is None and self.B != 0:
            raise InvalidStateError("a state without a resonant momentum must have B = 0")


@dataclass(frozen=True)
class ModeAmplitudes:
    """Per-mode decomposition of the fermion vacuum in the pair eigenbasis.

    For every ``k > 0`` the empty sector state is
    ``alpha_k |w_k> + beta_k |e_k>`` with ``|alpha|^2 + |beta|^2 = 1``.
    """

    ks: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray


@dataclass(frozen=True)
class CorrelationMatrix:
    """Majorana correlation matrix of a contiguous window of ``ell`` sites.

    Interleaved (site-major) index order: row ``2m`` is the first Majorana
    of site ``site_offset + m``, row ``2m + 1`` the second.
    """

    matrix: np.ndarray
    site_offset: int

    @property
    def ell(self) -> int:
        return self.matrix.shape[0] // 2


def _require_abc(params: ModelParams) -> None:
    if params.bc is not BoundaryCondition.ABC:
        raise InvalidStateError(
            "pair-sector states are defined on the antiperiodic grid; "
            "PBC grids contain unpaired momenta (k = 0, -pi)"
        )


def _sector_states(a: np.ndarray, b: np.ndarray, lam: np.ndarray, u: np.ndarray):
    """Sector-basis coefficients (alpha, beta) of vacuum and excited pair."""
    ratio = (lam - a) / b
    alpha_w = u.astype(complex)
    beta_w = -u * (lam - a) / np.conj(b)
    alpha_e = -u * ratio
    beta_e = -u.astype(complex)
    return alpha_w, beta_w, alpha_e, beta_e


def initial_overlap_amplitudes(params: ModelParams) -> ModeAmplitudes:
    """Expansion of the fermion vacuum ``|0_c>`` in the pair eigenbasis.

    Solving ``|0_c> = alpha |w> + beta |e>`` per sector gives the ratio
    ``beta / alpha = -(lam - a)/b*``; the returned pair is normalized.  The
    steady-state amplitude ratio ``B/A`` is ``beta/alpha`` at the resonant
    momentum.

    Raises
    ------
    ZeroOverlapError
        If some sector vacuum is orthogonal to ``|0_c>`` (then no steady
        state is reachable from this initial state).
    """
    _require_abc(params)
    table = mode_table(params)
    ratio = -(table.lam - table.a) / np.conj(table.b)
    norm = np.sqrt(1.0 + np.abs(ratio) ** 2)
    alpha = 1.0 / norm
    beta = ratio / norm
    if np.any(alpha < 1e-12):
        raise ZeroOverlapError("initial state has (numerically) zero vacuum overlap")
    return ModeAmplitudes(ks=table.ks.copy(), alpha=alpha.astype(complex), beta=beta)


def vacuum_state(params: ModelParams) -> SteadyState:
    """The pure quasiparticle vacuum, ``(A, B) = (1, 0)``."""
    return SteadyState(A=1.0, B=0.0, phi=0.0, qstar=None)


def steady_state(params: ModelParams, phi: float = 0.0) -> SteadyState:
    """Long-time state of the no-click evolution started from ``|0_c>``.

    Below the critical rate the resonant pair survives with the amplitude
    ratio fixed by :func:`initial_overlap_amplitudes`; at or above it the
    state is the bare vacuum.  On a finite grid the resonant momentum is
    the grid point closest to ``arccos(h/J)``.
    """
    _require_abc(params)
    if not has_resonant_momentum(params):
        return SteadyState(A=1.0, B=0.0, phi=phi, qstar=None)
    amps = initial_overlap_amplitudes(params)
    table = mode_table(params)
    iq = int(np.argmin(np.abs(table.lam.imag)))
    return SteadyState(
        A=complex(amps.alpha[iq]),
        B=complex(amps.beta[iq]),
        phi=phi,
        qstar=float(table.ks[iq]),
    )


def _resonant_index(table: ModeTable, qstar: float) -> int:
    idx = int(np.argmin(np.abs(table.ks - qstar)))
    if abs(table.ks[idx] - qstar) > 1e-9:
        raise InvalidStateError(
            f"state momentum q*={qstar} is not on the L={2 * len(table.ks)} grid"
        )
    return idx


def mode_correlators(params: ModelParams, state: SteadyState):
    """Momentum-space correlators ``(ks, n_k, F_k, G_k)`` of the state.

    ``n_k = <c^dag_k c_k>``, ``F_k = <c_k c_{-k}>``, ``G_k = <c^dag_k c^dag_{-k}>``
    for ``k > 0`` (the ``k < 0`` values follow from ``n_{-k} = n_k``,
    ``F_{-k} = -F_k``, ``G_{-k} = -G_k``).  All interference between the
    vacuum and the excited pair, including the norm ``<psi|psi>``, is
    resolved inside the resonant sector.
    """
    _require_abc(params)
    table = mode_table(params)
    alpha_w, beta_w, alpha_e, beta_e = _sector_states(table.a, table.b, table.lam, table.u)
    n = (np.abs(beta_w) ** 2).astype(complex)
    F = -np.conj(alpha_w) * beta_w
    G = np.conj(beta_w) * alpha_w

    if state.qstar is not None and state.B != 0:
        iq = _resonant_index(table, state.qstar)
        A = complex(state.A)
        Bt = complex(state.B) * np.exp(1j * state.phi)
        aw, bw = complex(alpha_w[iq]), complex(beta_w[iq])
        ae, be = complex(alpha_e[iq]), complex(beta_e[iq])
        overlap = np.conj(aw) * ae + np.conj(bw) * be
        norm = (
            abs(A) ** 2
            + abs(Bt) ** 2
            + np.conj(A) * Bt * overlap
            + np.conj(Bt) * A * np.conj(overlap)
        )

        def mixed(element):
            return (
                abs(A) ** 2 * element(aw, bw, aw, bw)
                + abs(Bt) ** 2 * element(ae, be, ae, be)
                + np.conj(A) * Bt * element(aw, bw, ae, be)
                + np.conj(Bt) * A * element(ae, be, aw, bw)
            ) / norm

        n[iq] = mixed(lambda a1, b1, a2, b2: np.conj(b1) * b2)
        F[iq] = mixed(lambda a1, b1, a2, b2: -np.conj(a1) * b2)
        G[iq] = mixed(lambda a1, b1, a2, b2: np.conj(b1) * a2)
    return table.ks, n, F, G


def correlation_functions(params: ModelParams, state: SteadyState, ell: int):
    """Real-space two-point functions for site separations ``|m - p| < ell``.

    Returns ``(cdag_c, cc, cdag_cdag)`` arrays indexed by ``delta + ell - 1``
    with ``delta = m - p``:

    * ``cdag_c[delta] = <c^dag_m c_p>``
    * ``cc[delta] = <c_m c_p>``
    * ``cdag_cdag[delta] = <c^dag_m c^dag_p>``
    """
    ks, n, F, G = mode_correlators(params, state)
    L = params.L
    deltas = np.arange(-(ell - 1), ell)
    cos_m = np.cos(np.multiply.outer(deltas, ks))
    sin_m = np.sin(np.multiply.outer(deltas, ks))
    cdag_c = (2.0 / L) * cos_m @ n
    cc = (2j / L) * sin_m @ F
    cdag_cdag = (-2j / L) * sin_m @ G
    return cdag_c, cc, cdag_cdag


def _assemble_majorana(cdag_c, cc, cdag_cdag, ell: int) -> np.ndarray:
    """Interleaved 2ell x 2ell Majorana matrix from two-point functions."""
    center = ell - 1
    m = np.arange(ell)
    delta = m[:, None] - m[None, :]
    t_dc = cdag_c[delta + center]
    t_cc = cc[delta + center]
    t_gg = cdag_cdag[delta + center]
    t_dc_t = cdag_c[-delta + center]  # <c^dag_p c_m>
    c_cdag = np.eye(ell) - t_dc_t  # <c_m c^dag_p>
    M = np.empty((2 * ell, 2 * ell), dtype=complex)
    M[0::2, 0::2] = t_gg + t_dc + c_cdag + t_cc
    M[1::2, 1::2] = -(t_gg - t_dc - c_cdag + t_cc)
    M[0::2, 1::2] = -1j * (t_gg - t_dc + c_cdag - t_cc)
    M[1::2, 0::2] = -1j * (t_gg + t_dc - c_cdag - t_cc)
    return M


def _blocks_correlation(params: ModelParams, state: SteadyState, ell: int) -> np.ndarray:
    """Closed-form block evaluation of the Majorana matrix (validation path).

    Writes the four blocks explicitly as grid sums plus resonant-sector
    interference corrections divided by the state norm.  Fully independent
    of the mode-correlator assembly except for the shared mode table.
    """
    table = mode_table(params)
    L = params.L
    ks, lam, a, b, u, v = table.ks, table.lam, table.a, table.b, table.u, table.v
    nsq = table.norm**2
    # vacuum per-mode coefficients of the sin/cos sums
    t_k = -2j * (lam - a).imag * u**2 / (b * nsq)  # F_k - G_k
    r_k = -2.0 * (lam - a).real * u**2 / (b * nsq)  # F_k + G_k
    w_k = (u**2 - np.abs(v) ** 2) / nsq  # 1 - 2 n_k

    corr_fg = corr_fpg = corr_n = 0.0 + 0j
    iq = None
    if state.qstar is not None and state.B != 0:
        iq = _resonant_index(table, state.qstar)
        A = complex(state.A)
        Bt = complex(state.B) * np.exp(1j * state.phi)
        lq, aq, bq, uq = complex(lam[iq]), complex(a[iq]), complex(b[iq]), complex(u[iq])
        T = complex(t_k[iq])  # also the vacuum/pair overlap
        norm = abs(A) ** 2 + abs(Bt) ** 2 + np.conj(A) * Bt * T + np.conj(Bt) * A * np.conj(T)
        cross = np.conj(A) * Bt
        ssym = cross + np.conj(cross)
        # corrections replace the resonant term of each vacuum sum
        corr_fg = (ssym - T * (cross * T + np.conj(cross) * np.conj(T))) / norm
        fpg_w = complex(r_k[iq])
        fpg_e = uq**2 * ((lq - aq) / bq - (np.conj(lq) - np.conj(aq)) / np.conj(bq))
        fpg_we = uq**2 * (1.0 + (lq - aq) * (np.conj(lq) - np.conj(aq)) / bq**2)
        fpg_ew = -(uq**2) * (
            (lq - aq) * (np.conj(lq) - np.conj(aq)) / np.conj(bq) ** 2 + 1.0
        )
        corr_fpg = (
            abs(A) ** 2 * fpg_w
            + abs(Bt) ** 2 * fpg_e
            + cross * fpg_we
            + np.conj(cross) * fpg_ew
        ) / norm - fpg_w
        n_w = abs(uq * (lq - aq) / bq) ** 2
        n_e = abs(uq) ** 2
        n_we = uq**2 * (np.conj(lq) - np.conj(aq)) / bq
        n_ew = uq**2 * (lq - aq) / np.conj(bq)
        corr_n = (
            abs(A) ** 2 * n_w + abs(Bt) ** 2 * n_e + cross * n_we + np.conj(cross) * n_ew
        ) / norm - n_w

    M = np.empty((2 * ell, 2 * ell), dtype=complex)
    for m in range(ell):
        for p in range(ell):
            delta = m - p
            sin_k = np.sin(ks * delta)
            cos_k = np.cos(ks * delta)
            fg = np.sum(sin_k * t_k)
            fpg = np.sum(sin_k * r_k)
            wc = np.sum(cos_k * w_k)
            if iq is not None:
                sq, cq = np.sin(ks[iq] * delta), np.cos(ks[iq] * delta)
                fg = fg + sq * corr_fg
                fpg = fpg + sq * corr_fpg
                wc = wc - 2.0 * cq * corr_n
            delta_mp = 1.0 if m == p else 0.0
            M[2 * m, 2 * p] = delta_mp + (2j / L) * fg
            M[2 * m + 1, 2 * p + 1] = delta_mp - (2j / L) * fg
            M[2 * m, 2 * p + 1] = -1j * ((2.0 / L) * wc + (2j / L) * (-fpg))
            M[2 * m + 1, 2 * p] = 1j * ((2.0 / L) * wc - (2j / L) * (-fpg))
    return M


def majorana_correlation(
    state: SteadyState,
    params: ModelParams,
    window: tuple[int, int],
    method: str = "mode-sum",
) -> CorrelationMatrix:
    """Majorana correlation matrix of a contiguous site window.

    Parameters
    ----------
    state : SteadyState
        Vacuum or vacuum-plus-pair state; ``state.qstar`` must lie on the
        momentum grid of ``params``.
    window : (offset, ell)
        First site and length of the window, ``ell <= L``.
    method : {"mode-sum", "blocks"}
        Production route (per-mode correlators) or the independent
        closed-form block route used for cross-validation.

    Both kets of the state are momentum superpositions of zero total
    momentum, so the matrix depends on site separations only and the offset
    does not affect the entries.
    """
    offset, ell = window
    _require_abc(params)
    if not 1 <= ell <= params.L:
        raise ValueError(f"window length must satisfy 1 <= ell <= L, got {ell}")
    if method not in _METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {_METHODS}")
    if method == "blocks":
        M = _blocks_correlation(params, state, ell)
    else:
        cdag_c, cc, cdag_cdag = correlation_functions(params, state, ell)
        M = _assemble_majorana(cdag_c, cc, cdag_cdag, ell)
    return CorrelationMatrix(matrix=M, site_offset=offset)


def occupations(params: ModelParams, state: SteadyState) -> np.ndarray:
    """Site occupations ``<n_l>`` (uniform by translation invariance)."""
    ks, n, _, _ = mode_correlators(params, state)
    mean_n = float(np.sum(2.0 * n.real)) / params.L
    return np.full(params.L, mean_n)
