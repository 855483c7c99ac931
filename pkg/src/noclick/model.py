"""Momentum-space description of two monitored free-fermion chains.

When a quantum Ising chain (transverse-field measurements) or a long-range
Kitaev chain (density measurements) is conditioned on the detector never
clicking, the evolution is generated by a quadratic *non-Hermitian*
Hamiltonian.  In momentum space it splits into independent 2x2 Bloch blocks
over paired momenta ``(k, -k)``::

    H(k) = [[ a(k),  b(k)],
            [-b(k), -a(k)]],      a = 2(h - J cos k) + i*gamma/2,

with the pairing amplitude ``b = 2iJ sin k`` for the Ising chain and
``b = iJ g_d(k)`` for the long-range Kitaev chain, where ``g_d`` is a
finite-size Clausen-type lattice sum.  Each block is brought to diagonal
form ``diag(lambda_k, -lambda_k)`` by a (non-unitary) Bogoliubov rotation
``V_k``; the branch of ``lambda_k = sqrt(a^2 + |b|^2)`` with non-positive
imaginary part is selected so that the quasiparticle vacuum is the
attractor of the normalized no-click evolution.

This module provides the per-mode spectral and Bogoliubov data together
with derived diagnostics: the imaginary spectral gap, the resonant momentum
``q*`` (where ``Im lambda`` vanishes), critical measurement rates and
small-momentum asymptotics of the long-range dispersion.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gamma as gamma_fn
from scipy.special import zeta as zeta_ge1

from .errors import DegenerateModeError, RegimeError

# Relative tolerance used for the lambda branch tie-break (Im lambda == 0).
_BRANCH_TOL = 1e-13
# Absolute floor of the q* resonance tolerance.
_RESONANCE_TOL = 1e-9


class ModelKind(enum.Enum):
    ISING = "ising"
    LONG_RANGE_KITAEV = "kitaev"


class BoundaryCondition(enum.Enum):
    PBC = "pbc"
    ABC = "abc"


@dataclass(frozen=True)
class ModelParams:
    """Couplings, size and boundary condition of one chain.

    Parameters
    ----------
    kind : ModelKind
        Which chain; the long-range Kitaev chain additionally needs ``d``.
    h : float
        Transverse field (Ising) / chemical potential scale (Kitaev).
    gamma : float
        Measurement rate, >= 0.
    L : int
        Even number of sites.
    J : float
        Hopping/exchange coupling, > 0.  Defaults to 1 (the energy unit).
    d : float or None
        Power-law exponent of the Kitaev pairing decay.  Ignored for Ising.
    bc : BoundaryCondition
        Fermionic boundary condition.  The even-parity sector of both
        models lives on the antiperiodic grid, which is the default.
    """

    kind: ModelKind
    h: float
    gamma: float
    L: int
    J: float = 1.0
    d: float | None = None
    bc: BoundaryCondition = BoundaryCondition.ABC

    def __post_init__(self) -> None:
        if self.L <= 0 or self.L % 2 != 0:
            raise ValueError(f"L must be a positive even integer, got {self.L}")
        if self.gamma < 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")
        if self.J <= 0:
            raise ValueError(f"J must be > 0, got {self.J}")
        if self.kind is ModelKind.LONG_RANGE_KITAEV and self.d is None:
            raise ValueError("the long-range Kitaev chain requires the exponent d")


@dataclass(frozen=True)
class MomentumGrid:
    """Ordered momenta in (-pi, pi] (PBC includes the -pi endpoint)."""

    ks: np.ndarray

    def positive(self) -> np.ndarray:
        return self.ks[self.ks > 0]


@dataclass(frozen=True)
class ModeData:
    """Spectral and Bogoliubov data of one momentum pair ``(k, -k)``.

    ``lam`` is the quasiparticle energy branch with ``Im lam <= 0``;
    ``u``/``v`` are the rotation coefficients with ``v = u (lam - a)/b``,
    ``det_v`` the determinant of the 2x2 rotation and ``norm = |u|^2 + |v|^2``
    (identically 1 for a non-degenerate block).
    """

    k: float
    a: complex
    b: complex
    lam: complex
    u: complex
    v: complex
    det_v: complex
    norm: float


@dataclass(frozen=True)
class ModeTable:
    """Vectorized :class:`ModeData` over the positive half of the grid."""

    ks: np.ndarray
    a: np.ndarray
    b: np.ndarray
    lam: np.ndarray
    u: np.ndarray
    v: np.ndarray
    det_v: np.ndarray
    norm: np.ndarray

    def __len__(self) -> int:
        return len(self.ks)

    def at(self, index: int) -> ModeData:
        return ModeData(
            k=float(self.ks[index]),
            a=complex(self.a[index]),
            b=complex(self.b[index]),
            lam=complex(self.lam[index]),
            u=complex(self.u[index]),
            v=complex(self.v[index]),
            det_v=complex(self.det_v[index]),
            norm=float(self.norm[index]),
        )


@dataclass(frozen=True)
class SpectrumSummary:
    """Imaginary gap, resonant momentum and constant offset of one spectrum.

    ``qstar`` is the grid momentum minimizing ``|Im lambda_k|``; it is only
    reported when the mode is resonant, which is decided by comparing
    ``gamma`` against the critical rate (finite grids generically miss the
    exact resonance, so the minimum alone is not conclusive).
    ``qstar_gap`` always carries the grid minimum itself.
    """

    imaginary_gap: float
    qstar: float | None
    qstar_gap: float
    gamma_c: float
    lambda0: complex


def momentum_grid(params: ModelParams) -> MomentumGrid:
    """Allowed momenta of the chain, sorted ascending.

    ABC: ``k = pi(2n+1)/L``; PBC: ``k = 2 pi n / L``; in both cases
    ``n`` runs over ``{-L/2, ..., L/2 - 1}``.
    """
    n = np.arange(-(params.L // 2), params.L // 2)
    if params.bc is BoundaryCondition.ABC:
        ks = np.pi * (2 * n + 1) / params.L
    else:
        ks = 2 * np.pi * n / params.L
    return MomentumGrid(ks=np.sort(ks))


def clausen_g(k: float | np.ndarray, d: float, L: int) -> float | np.ndarray:
    """Finite-size pairing sum ``g_d(k) = sum_{r=1}^{L-1} sin(kr) / l^d``.

    The distance is taken on the ring, ``l = min(r, L - r)``.  The sum is
    meaningful on momentum-grid values of ``k`` (where the two halves of the
    ring add coherently); other ``k`` are accepted but the result then
    oscillates with ``L`` instead of converging.  ``d <= 0`` is allowed and
    corresponds to an unphysical growing pairing.
    """
    if L < 2:
        raise ValueError(f"L must be >= 2, got {L}")
    r = np.arange(1, L)
    weight = 1.0 / np.minimum(r, L - r) ** float(d)
    k_arr = np.asarray(k, dtype=float)
    out = np.sin(np.multiply.outer(k_arr, r)) @ weight
    if np.isscalar(k) or k_arr.ndim == 0:
        return float(out)
    return out


def _eta_borwein(s: float, n: int = 40) -> float:
    """Dirichlet eta by Borwein's alternating-series acceleration."""
    d = np.empty(n + 1)
    term = 1.0
    d[0] = term
    for i in range(1, n + 1):
        term *= (n + i - 1) * (n - i + 1) * 4.0 / ((2 * i - 1) * (2 * i))
        d[i] = d[i - 1] + term
    ks = np.arange(n)
    signs = (-1.0) ** ks
    return float(-np.sum(signs * (d[ks] - d[n]) / (ks + 1.0) ** s) / d[n])


def _zeta_any(s: float) -> float:
    """Riemann zeta on the real line (functional equation for s < 0)."""
    if s > 1:
        return float(zeta_ge1(s, 1))
    if s == 1:
        raise ValueError("zeta pole at s = 1")
    if s == 0:
        return -0.5
    if s > 0:
        return _eta_borwein(s) / (1.0 - 2.0 ** (1.0 - s))
    return float(
        2.0**s
        * np.pi ** (s - 1)
        * math.sin(math.pi * s / 2.0)
        * gamma_fn(1.0 - s)
        * zeta_ge1(1.0 - s, 1)
    )


def clausen_g_limit(k: float, d: float) -> float:
    """Thermodynamic-limit pairing series ``sum_{r>=1} sin(kr)/r^d``.

    Evaluated through the convergent expansion of the polylogarithm around
    ``k = 0`` (valid for all ``0 < k < 2 pi``)::

        g_d(k) = Gamma(1-d) cos(pi d / 2) k^(d-1)
                 + sum_{l>=0} (-1)^l zeta(d - 2l - 1) k^(2l+1) / (2l+1)!

    with the standard logarithmic replacement of the singular term when
    ``d`` is a positive integer.  Successive partial sums are iterated until
    they agree to 1e-12, which is far below the 1e-10 target accuracy.

    Note the relation to the finite-size sum: on antiperiodic grid momenta
    the two halves of the ring add coherently, so ``clausen_g(k, d, L)``
    converges to ``2 * clausen_g_limit(k, d)`` along grid sequences.
    """
    if d <= 0:
        raise ValueError(f"the infinite series requires d > 0, got d={d}")
    if k <= 0 or k >= 2 * np.pi:
        if k == 0 and d > 1:
            return 0.0
        raise ValueError(f"k must lie in (0, 2*pi), got {k} (series diverges at k=0 for d<=1)")
    if d == 1.0:
        return (np.pi - k) / 2.0

    n = int(round(d))
    is_integer = abs(d - n) < 1e-12 and n >= 1
    if is_integer:
        # Li_n(e^{ik}): the j = n-1 term degenerates into a log.
        harmonic = sum(1.0 / j for j in range(1, n))
        mu_pow = 1j * k  # mu = ik
        sing = mu_pow ** (n - 1) / math.factorial(n - 1) * (
            harmonic - (math.log(k) - 1j * np.pi / 2.0)
        )
        acc = complex(sing)
        last_two = [np.inf, np.inf]
        for j in range(300):
            if j == n - 1:
                continue  # replaced by the logarithmic term above
            term = _zeta_any(n - j) * mu_pow**j / math.factorial(j)
            acc += term
            last_two = [last_two[1], abs(term)]
            # zeta vanishes at negative even integers, so require two
            # consecutive negligible terms before stopping
            if j > n and max(last_two) < 1e-14 * max(1.0, abs(acc)):
                break
        return float(acc.imag)

    lead = gamma_fn(1.0 - d) * math.cos(math.pi * d / 2.0) * k ** (d - 1.0)
    acc = float(lead)
    prev = np.inf
    l = 0
    while l < 300:
        term = (-1.0) ** l * _zeta_any(d - 2 * l - 1) * k ** (2 * l + 1) / math.factorial(2 * l + 1)
        acc += term
        if abs(acc - prev) < 1e-12 * max(1.0, abs(acc)) and abs(term) < 1e-12:
            break
        prev = acc
        l += 1
    return acc


def bloch_coefficients(params: ModelParams, k: float | np.ndarray) -> tuple[complex, complex]:
    """Diagonal and off-diagonal entries ``(a, b)`` of the Bloch block at ``k``."""
    a = 2.0 * (params.h - params.J * np.cos(k)) + 0.5j * params.gamma
    if params.kind is ModelKind.ISING:
        b = 2j * params.J * np.sin(k)
    else:
        b = 1j * params.J * clausen_g(k, params.d, params.L)
    return a, b


def bloch_block(a: complex, b: complex) -> np.ndarray:
    """The 2x2 block ``[[a, b], [-b, -a]]`` in the ``(c_k, c^dag_{-k})`` basis."""
    return np.array([[a, b], [-b, -a]], dtype=complex)


def quasiparticle_energy(a: complex | np.ndarray, b: complex | np.ndarray) -> complex | np.ndarray:
    """Quasiparticle energy ``lambda = sqrt(a^2 + |b|^2)``, branch ``Im lambda <= 0``.

    When the imaginary part vanishes (within the branch tolerance) the root
    with ``Re lambda >= 0`` is returned, which connects continuously to the
    Hermitian dispersion at ``gamma = 0``.
    """
    lam = np.sqrt(np.asarray(a, dtype=complex) ** 2 + np.abs(b) ** 2)
    scale = np.maximum(1.0, np.abs(lam))
    lam = np.where(lam.imag > _BRANCH_TOL * scale, -lam, lam)
    tie = (np.abs(lam.imag) <= _BRANCH_TOL * scale) & (lam.real < 0)
    lam = np.where(tie, -lam, lam)
    if np.isscalar(a) or np.asarray(a).ndim == 0:
        return complex(lam)
    return lam


@dataclass(frozen=True)
class BogoliubovData:
    """Rotation fragment ``{u, v, det_v, norm}`` of one Bloch block."""

    u: complex
    v: complex
    det_v: complex
    norm: float


def bogoliubov(a: complex, b: complex, lam: complex) -> BogoliubovData:
    """Bogoliubov coefficients of the rotation diagonalizing one Bloch block.

    ``u = 1/sqrt(1 + |(lam-a)/b|^2)`` (real positive), ``v = u (lam-a)/b``,
    and ``det_v`` is the determinant of::

        V = [[u, -((lam-a)/b*) u*],
             [((lam-a)/b) u,  u*]]

    Raises
    ------
    DegenerateModeError
        If ``b == 0``; the block is then already diagonal and the caller
        should use ``u=1, v=0, det_v=1``.
    """
    if b == 0:
        raise DegenerateModeError("b = 0: Bloch block is already diagonal")
    ratio = (lam - a) / b
    ratio_star = (lam - a) / np.conj(b)  # note: (lam-a) itself not conjugated
    u = 1.0 / math.sqrt(1.0 + abs(ratio) ** 2)
    v = u * ratio
    v_mat = np.array(
        [[u, -ratio_star * u], [ratio * u, u]], dtype=complex
    )
    det_v = v_mat[0, 0] * v_mat[1, 1] - v_mat[0, 1] * v_mat[1, 0]
    norm = abs(u) ** 2 + abs(v) ** 2
    return BogoliubovData(u=u, v=complex(v), det_v=complex(det_v), norm=float(norm))


def mode_table(params: ModelParams) -> ModeTable:
    """Vectorized mode data over the positive momenta of the grid.

    Degenerate blocks (``b = 0``, possible on PBC grids) are treated as
    already diagonal: ``u = 1, v = 0, det_v = 1``.
    """
    ks = momentum_grid(params).positive()
    a, b = bloch_coefficients(params, ks)
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    lam = quasiparticle_energy(a, b)
    degenerate = b == 0
    safe_b = np.where(degenerate, 1.0, b)
    ratio = np.where(degenerate, 0.0, (lam - a) / safe_b)
    u = 1.0 / np.sqrt(1.0 + np.abs(ratio) ** 2)
    v = u * ratio
    # det V = u^2 (1 + (lam-a)^2 / (b b*)) and (lam-a)^2 = ratio^2 b^2
    det_v = u**2 * (1.0 + ratio**2 * safe_b / np.conj(safe_b))
    det_v = np.where(degenerate, 1.0, det_v)
    norm = np.abs(u) ** 2 + np.abs(v) ** 2
    return ModeTable(ks=ks, a=a, b=b, lam=lam, u=u.astype(complex), v=v, det_v=det_v, norm=norm)


def resonance_tolerance(lam: complex) -> float:
    """Tolerance below which ``|Im lambda|`` counts as an exact resonance."""
    return max(_RESONANCE_TOL, 10.0 * np.finfo(float).eps * abs(lam))


def has_resonant_momentum(params: ModelParams) -> bool:
    """True when a resonance exists: ``|h/J| < 1`` and ``gamma < gamma_c``."""
    if abs(params.h / params.J) >= 1.0:
        return False
    return params.gamma < critical_gamma(params)


def critical_gamma(params: ModelParams, thermodynamic: bool = False) -> float:
    """Measurement rate at which the imaginary gap opens at the resonance.

    The resonant momentum satisfies ``cos q = h/J``; the gap closes there
    for ``gamma < 2|b(q)|``, i.e.

    * Ising: ``gamma_c = 4 J sqrt(1 - (h/J)^2)``,
    * Kitaev: ``gamma_c = 2 J |g_d(q)|`` with ``g_d`` evaluated at the grid
      momentum nearest ``arccos(h/J)`` (the finite-size sum is only coherent
      on the grid).  With ``thermodynamic=True`` the on-grid limit
      ``2 * clausen_g_limit`` replaces the finite sum.

    Returns 0.0 when ``|h/J| >= 1`` (no resonant momentum exists).
    """
    ratio = params.h / params.J
    if abs(ratio) >= 1.0:
        return 0.0
    q = math.acos(ratio)
    if params.kind is ModelKind.ISING:
        return 4.0 * params.J * math.sqrt(1.0 - ratio**2)
    if thermodynamic:
        g_at_q = 2.0 * clausen_g_limit(q, params.d)
    else:
        ks = momentum_grid(params).positive()
        q_grid = float(ks[np.argmin(np.abs(ks - q))])
        g_at_q = clausen_g(q_grid, params.d, params.L)
    return 2.0 * params.J * abs(g_at_q)


def spectrum_summary(params: ModelParams) -> SpectrumSummary:
    """Imaginary gap, resonant momentum, critical rate and ``Lambda_0``."""
    table = mode_table(params)
    gaps = np.abs(table.lam.imag)
    i_min = int(np.argmin(gaps))
    gamma_c = critical_gamma(params)
    qstar = float(table.ks[i_min]) if has_resonant_momentum(params) else None
    return SpectrumSummary(
        imaginary_gap=float(gaps[i_min]),
        qstar=qstar,
        qstar_gap=float(gaps[i_min]),
        gamma_c=gamma_c,
        lambda0=complex(np.sum(table.lam)),
    )


def smallk_asymptotics(
    d: float, h: float, gamma: float, k: float, J: float = 1.0
) -> complex:
    """Leading small-``k`` expansion of the long-range dispersion for ``d < 1``.

    With ``G = cos(pi d / 2) Gamma(1 - d)`` and ``a0 = 2(h - J) + i gamma/2``::

        lambda_k ~ J G k^(d-1) [1 + zeta(d-1) k^(2-d) / G
                                  + a0^2 k^(2-2d) / (2 J^2 G^2)]

    The real part diverges as ``k^(d-1)`` while the imaginary part vanishes
    as ``k^(1-d)``; the expansion is a validation reference for both slopes.
    """
    if d >= 1.0:
        raise RegimeError(f"small-k expansion requires d < 1, got d={d}")
    if not 0 < k < 1:
        raise ValueError(f"expansion assumes 0 < k << 1, got k={k}")
    big_g = math.cos(math.pi * d / 2.0) * gamma_fn(1.0 - d)
    a0 = 2.0 * (h - J) + 0.5j * gamma
    correction = (
        1.0
        + _zeta_any(d - 1.0) * k ** (2.0 - d) / big_g
        + a0**2 * k ** (2.0 - 2.0 * d) / (2.0 * J**2 * big_g**2)
    )
    return J * big_g * k ** (d - 1.0) * correction


def dgamma_dk_at_qstar(h: float, gamma: float, J: float = 1.0) -> float:
    """Magnitude of the linearized decay-rate slope at the resonance.

    Returns ``2 gamma / sqrt(1 - gamma^2/gamma_c^2)``, the slope entering
    the validity estimates of the rare-jump regime.  It corresponds to the
    decay rate of the *pair-state probability* near ``q*`` and equals four
    times the slope of ``Im lambda_k`` itself.

    Raises
    ------
    RegimeError
        If ``gamma >= gamma_c`` (the linearization breaks down; the gap
        grows as ``|k - q*|^(1/2)`` exactly at the critical rate).
    """
    if abs(h / J) >= 1.0:
        raise RegimeError("no resonant momentum for |h/J| >= 1")
    gamma_c = 4.0 * J * math.sqrt(1.0 - (h / J) ** 2)
    if gamma >= gamma_c:
        raise RegimeError(f"gamma={gamma} >= gamma_c={gamma_c}: slope diverges")
    return 2.0 * gamma / math.sqrt(1.0 - gamma**2 / gamma_c**2)
