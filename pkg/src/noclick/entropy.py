"""Entanglement entropy and scaling diagnostics from correlation matrices.

For a Gaussian state the reduced density matrix of a site window is fixed
by the window block of the Majorana correlation matrix ``M = 1 + i Omega``.
The eigenvalues of the Hermitian matrix ``i Omega`` come in pairs ``+-nu``
with ``nu in [0, 1]`` and the bipartite von Neumann entropy (in nats) is
``S = sum_pairs H2((1 + nu)/2)`` with the binary entropy ``H2``.

The scaling diagnostics follow the standard estimators: the finite
difference ``Delta S = S(ell+1) - S(ell)``, the local log coefficient
``c = ell * Delta S`` and a least-squares fit of ``S = c ln(ell) + b``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalInstabilityError
from .gaussian_state import (
    CorrelationMatrix,
    SteadyState,
    _assemble_majorana,
    correlation_functions,
    steady_state,
    vacuum_state,
)
from .model import ModelParams, has_resonant_momentum

# Eigenvalues of i*Omega may exceed [-1, 1] by at most this much before the
# computation is considered broken (silent clamping would hide assembly bugs).
_NU_TOL = 1e-6


@dataclass(frozen=True)
class EntropyRow:
    """One row of an entropy scan."""

    kind: str
    J: float
    h: float
    gamma: float
    d: float | None
    L: int
    L_A: int
    S: float
    delta_S: float
    c_est: float
    phi_averaged: bool


@dataclass(frozen=True)
class LogFit:
    """Least-squares fit of ``S = c ln(L_A) + b0``; the residual is RMS."""

    c: float
    b0: float
    residual: float


def _binary_entropy(p: np.ndarray) -> np.ndarray:
    out = np.zeros_like(p)
    inner = (p > 0.0) & (p < 1.0)
    pi = p[inner]
    out[inner] = -pi * np.log(pi) - (1.0 - pi) * np.log1p(-pi)
    return out


def entanglement_entropy(M: CorrelationMatrix | np.ndarray) -> float:
    """Von Neumann entropy (nats) of the window described by ``M``.

    Raises
    ------
    NumericalInstabilityError
        If the spectrum of ``i Omega`` leaves ``[-1, 1]`` by more than 1e-6
        or if the ``+-nu`` pairing is broken.
    """
    mat = M.matrix if isinstance(M, CorrelationMatrix) else M
    nu = np.linalg.eigvalsh(mat - np.eye(mat.shape[0]))
    if np.max(np.abs(nu)) > 1.0 + _NU_TOL:
        raise NumericalInstabilityError(
            f"correlation spectrum outside [-1, 1]: max |nu| = {np.max(np.abs(nu))}"
        )
    # pairing sanity: the spectrum must be symmetric under nu -> -nu
    sorted_nu = np.sort(nu)
    if not np.allclose(sorted_nu, -sorted_nu[::-1], atol=1e-6):
        raise NumericalInstabilityError("correlation spectrum is not +-nu symmetric")
    nu = np.clip(nu, -1.0, 1.0)
    return 0.5 * float(np.sum(_binary_entropy((1.0 + nu) / 2.0)))


def _entropies_for_lengths(
    params: ModelParams, state: SteadyState, lengths: list[int]
) -> dict[int, float]:
    """Entropies of windows [0, ell) sharing one correlation-function table."""
    ell_max = max(lengths)
    cdag_c, cc, cdag_cdag = correlation_functions(params, state, ell_max)
    center = ell_max - 1
    out: dict[int, float] = {}
    for ell in sorted(set(lengths)):
        sl = slice(center - (ell - 1), center + ell)
        out[ell] = entanglement_entropy(
            _assemble_majorana(cdag_c[sl], cc[sl], cdag_cdag[sl], ell)
        )
    return out


def window_entropy(params: ModelParams, state: SteadyState, ell: int) -> float:
    """Entropy of one contiguous window of ``ell`` sites."""
    return _entropies_for_lengths(params, state, [ell])[ell]


def incremental_ratio(params: ModelParams, state: SteadyState, L_A: int) -> float:
    """Finite difference ``Delta S = S(L_A + 1) - S(L_A)``."""
    if L_A + 1 > params.L:
        raise ValueError(f"L_A + 1 = {L_A + 1} exceeds L = {params.L}")
    ent = _entropies_for_lengths(params, state, [L_A, L_A + 1])
    return ent[L_A + 1] - ent[L_A]


def log_coefficient(params: ModelParams, state: SteadyState, L_A: int) -> float:
    """Local log-law coefficient estimate ``c = L_A * Delta S``."""
    return L_A * incremental_ratio(params, state, L_A)


def entropy_profile(
    params: ModelParams,
    state: SteadyState,
    L_As: list[int],
    phi_averaged: bool = False,
    n_phases: int = 64,
) -> list[EntropyRow]:
    """Entropy scan over window lengths, optionally averaged over the phase.

    One row per requested ``L_A`` with ``S``, ``Delta S`` and the local
    coefficient ``c = L_A * Delta S``.
    """
    if any(ell > params.L for ell in L_As):
        raise ValueError("every L_A must satisfy L_A <= L")
    lengths = sorted(set(L_As) | {ell + 1 for ell in L_As if ell + 1 <= params.L})
    if phi_averaged and state.qstar is not None and state.B != 0:
        tables = [
            _entropies_for_lengths(
                params,
                SteadyState(A=state.A, B=state.B, phi=phi, qstar=state.qstar),
                lengths,
            )
            for phi in np.linspace(0.0, 2.0 * np.pi, n_phases, endpoint=False)
        ]
        ent = {ell: float(np.mean([t[ell] for t in tables])) for ell in lengths}
    else:
        ent = _entropies_for_lengths(params, state, lengths)
    rows = []
    for ell in L_As:
        delta = ent[ell + 1] - ent[ell] if ell + 1 in ent else float("nan")
        rows.append(
            EntropyRow(
                kind=params.kind.value,
                J=params.J,
                h=params.h,
                gamma=params.gamma,
                d=params.d,
                L=params.L,
                L_A=ell,
                S=ent[ell],
                delta_S=delta,
                c_est=ell * delta,
                phi_averaged=phi_averaged,
            )
        )
    return rows


def phase_averaged_entropy(params: ModelParams, L_A: int, n_phases: int = 64) -> float:
    """Mean steady-state entropy over the relative phase of the pair.

    The phase winds linearly in time, so the uniform average over
    ``n_phases`` equally spaced values stands in for the long-time average.
    Above the critical rate the state is phase-independent and the vacuum
    value is returned directly.
    """
    if not has_resonant_momentum(params):
        return window_entropy(params, vacuum_state(params), L_A)
    values = [
        window_entropy(params, steady_state(params, phi=phi), L_A)
        for phi in np.linspace(0.0, 2.0 * np.pi, n_phases, endpoint=False)
    ]
    return float(np.mean(values))


def fit_log_law(rows: list[EntropyRow] | tuple[np.ndarray, np.ndarray]) -> LogFit:
    """Least-squares fit of ``S`` against ``ln L_A``.

    Accepts either entropy rows or a raw ``(L_As, Ss)`` pair.  Requires at
    least three distinct window lengths.
    """
    if isinstance(rows, tuple):
        las, ss = np.asarray(rows[0], dtype=float), np.asarray(rows[1], dtype=float)
    else:
        las = np.array([r.L_A for r in rows], dtype=float)
        ss = np.array([r.S for r in rows], dtype=float)
    if len(np.unique(las)) < 3:
        raise ValueError("log-law fit requires >= 3 distinct window lengths")
    design = np.vstack([np.log(las), np.ones_like(las)]).T
    coef, *_ = np.linalg.lstsq(design, ss, rcond=None)
    resid = ss - design @ coef
    return LogFit(c=float(coef[0]), b0=float(coef[1]), residual=float(np.sqrt(np.mean(resid**2))))
