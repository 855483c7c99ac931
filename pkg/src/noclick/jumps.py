"""Rare-jump dynamics reduced to a Moebius map on the amplitude ratio.

When jumps are sparse enough that every decaying quasiparticle relaxes
between consecutive clicks, the state right before each jump has the
two-amplitude form ``A |0> + e^{i phi} B |q, -q>`` and a local projection
followed by relaxation acts as the fractional-linear map

    x -> e^{i phi} (C1 - 1) x + C2
         ----------------------------,      x = A / B,
             C3 x + C4 + C5 - 1

with coefficients built from the Bogoliubov data of the grid.  The state is
stored as the projective pair ``(A, B)`` so the pole ``B = 0`` needs no
special casing.  Waiting times between jumps are exponential with rate
``gamma * sum_l <1 - n_l>`` and advance the relative phase at twice the
real part of the resonant energy.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import RegimeError
from .gaussian_state import SteadyState, occupations, steady_state
from .model import ModelParams, critical_gamma, has_resonant_momentum, mode_table


@dataclass(frozen=True)
class JumpCoefficients:
    """Coefficients ``C1..C5`` of the jump map at the resonant momentum."""

    C1: complex
    C2: complex
    C3: complex
    C4: complex
    C5: complex
    qstar: float
    lam_q: complex

    def matrix(self) -> np.ndarray:
        """Moebius coefficient matrix ``[[C1-1, C2], [C3, C4+C5-1]]``."""
        return np.array(
            [[self.C1 - 1.0, self.C2], [self.C3, self.C4 + self.C5 - 1.0]],
            dtype=complex,
        )


class PhaseMode(enum.Enum):
    ZERO = "zero"
    FIXED = "fixed"
    STOCHASTIC = "stochastic"


@dataclass(frozen=True)
class TrajectoryConfig:
    """Stochastic trajectory settings.

    ``lambda_steps`` is the number of deterministic relaxation steps of
    length ``dt`` inserted before each random wait; both intervals advance
    the relative phase in stochastic mode.
    """

    dt: float = 0.01
    seed: int = 0
    n_jumps: int = 1
    lambda_steps: int = 0
    phase_mode: PhaseMode = PhaseMode.STOCHASTIC
    fixed_phi: float = 0.0

    def __post_init__(self) -> None:
        if self.dt <= 0:
            raise ValueError(f"dt must be > 0, got {self.dt}")
        if self.n_jumps < 0:
            raise ValueError(f"n_jumps must be >= 0, got {self.n_jumps}")
        if self.lambda_steps < 0:
            raise ValueError(f"lambda_steps must be >= 0, got {self.lambda_steps}")


@dataclass(frozen=True)
class JumpEvent:
    """One jump: ratio before/after, waiting time, optional entropy."""

    index: int
    x_before: complex
    x_after: complex
    tau: float
    entropy: float | None = None


@dataclass(frozen=True)
class TrajectoryRecord:
    """Full record of one trajectory (bit-identical under a fixed seed)."""

    events: list[JumpEvent] = field(default_factory=list)
    final_A: complex = 1.0
    final_B: complex = 0.0
    total_time: float = 0.0
    qstar: float | None = None


def jump_coefficients(params: ModelParams) -> JumpCoefficients:
    """Evaluate ``C1..C5`` over the positive-momentum grid.

    ``C1`` and ``C5`` are grid sums of ``(2/(L det V_k)) (lam-a)^2/|b|^2 |u|^2``
    (``C5`` omitting the resonant mode); ``C2, C3, C4`` carry the resonant
    mode only and scale as ``1/L``.  Requires a resonant momentum.
    """
    if not has_resonant_momentum(params):
        raise RegimeError(
            f"no resonant momentum for gamma={params.gamma} >= gamma_c or |h| >= J"
        )
    table = mode_table(params)
    L = params.L
    iq = int(np.argmin(np.abs(table.lam.imag)))
    terms = (
        2.0
        / (L * table.det_v)
        * ((table.lam - table.a) ** 2 / np.abs(table.b) ** 2)
        * np.abs(table.u) ** 2
    )
    C1 = complex(np.sum(terms))
    C5 = complex(np.sum(terms) - terms[iq])
    lam_q, a_q, b_q = (complex(table.lam[iq]), complex(table.a[iq]), complex(table.b[iq]))
    u_q, det_q = complex(table.u[iq]), complex(table.det_v[iq])
    C2 = 2.0 * u_q**2 / (L * det_q) * (lam_q - a_q) / b_q
    C3 = 2.0 * np.conj(u_q) ** 2 / (L * det_q) * (lam_q - a_q) / np.conj(b_q)
    C4 = 2.0 * abs(u_q) ** 2 / (L * det_q)
    return JumpCoefficients(
        C1=C1, C2=complex(C2), C3=complex(C3), C4=complex(C4), C5=C5,
        qstar=float(table.ks[iq]), lam_q=lam_q,
    )


def _apply_map_pair(A: complex, B: complex, C: JumpCoefficients, phi: float):
    """Projective jump update on the amplitude pair, renormalized."""
    A2 = np.exp(1j * phi) * ((C.C1 - 1.0) * A + C.C2 * B)
    B2 = C.C3 * A + (C.C4 + C.C5 - 1.0) * B
    scale = math.hypot(abs(A2), abs(B2))
    if scale == 0.0:
        raise RegimeError("jump map annihilated the state (degenerate coefficients)")
    return A2 / scale, B2 / scale


def apply_jump_map(x: complex, C: JumpCoefficients, phi: float = 0.0) -> complex:
    """One application of the jump map on the ratio ``x = A/B``.

    ``x = inf`` is handled projectively and maps to ``e^{i phi}(C1-1)/C3``.
    """
    if np.isinf(x):
        A, B = _apply_map_pair(1.0, 0.0, C, phi)
    else:
        A, B = _apply_map_pair(complex(x), 1.0, C, phi)
    if B == 0:
        return complex(np.inf)
    return complex(A / B)


@dataclass(frozen=True)
class FixedPoint:
    """A fixed point of the jump map with its stability multiplier."""

    x: complex
    multiplier: float
    attracting: bool


def fixed_points(C: JumpCoefficients, phi: float = 0.0) -> tuple[FixedPoint, FixedPoint]:
    """Both fixed points of ``x -> e^{i phi} Moebius(x)`` with stability tags.

    Solves the quadratic ``C3 x^2 + (C4 + C5 - 1 - e^{i phi}(C1 - 1)) x
    - e^{i phi} C2 = 0``.  A degenerate quadratic (``C3 = 0``) raises.
    """
    ph = np.exp(1j * phi)
    qa = C.C3
    qb = (C.C4 + C.C5 - 1.0) - ph * (C.C1 - 1.0)
    qc = -ph * C.C2
    if abs(qa) < 1e-300:
        raise RegimeError("degenerate quadratic: C3 = 0 leaves a single fixed point")
    roots = np.roots([qa, qb, qc])

    def tag(x: complex) -> FixedPoint:
        num = ph * ((C.C1 - 1.0) * (C.C4 + C.C5 - 1.0) - C.C2 * C.C3)
        den = (C.C3 * x + C.C4 + C.C5 - 1.0) ** 2
        mult = abs(num / den)
        return FixedPoint(x=complex(x), multiplier=float(mult), attracting=mult < 1.0)

    return tag(roots[0]), tag(roots[1])


def jump_rate_from_occupations(gamma: float, n: np.ndarray) -> float:
    """Total click rate ``gamma * sum_l (1 - n_l)`` for given occupations."""
    return float(gamma * np.sum(1.0 - np.asarray(n, dtype=float)))


def jump_rate(params: ModelParams, state: SteadyState) -> float:
    """Click rate of the state, ``gamma * sum_l <1 - n_l>``.

    Extensive: proportional to ``L`` at fixed couplings.  Multiply by a
    step ``dt`` for a per-step probability.
    """
    return jump_rate_from_occupations(params.gamma, occupations(params, state))


def sample_waiting_time(rate: float, rng: np.random.Generator) -> float:
    """Exponential waiting time with mean ``1/rate``."""
    if rate <= 0:
        raise ValueError(f"rate must be > 0, got {rate}")
    return float(rng.exponential(1.0 / rate))


def relaxation_steps(params: ModelParams, dt: float = 0.01) -> int:
    """Number of steps of size ``dt`` needed for non-resonant modes to decay.

    Uses the linearized-gap relaxation time (the ``lambda_dt`` field of
    :func:`validity_estimate`); this is the natural choice for the
    deterministic interval of :class:`TrajectoryConfig`.
    """
    gamma_c = critical_gamma(params)
    if gamma_c <= 0 or params.gamma >= gamma_c:
        return 0
    root = math.sqrt(1.0 - params.gamma**2 / gamma_c**2)
    lam_dt = params.L * math.log(10.0 * params.L) * root / (4.0 * math.pi * params.gamma)
    return int(math.ceil(lam_dt / dt))


def run_trajectory(
    params: ModelParams,
    cfg: TrajectoryConfig,
    entropy_window: int | None = None,
) -> TrajectoryRecord:
    """Simulate one rare-jump trajectory of the amplitude pair.

    Each cycle waits ``lambda_steps * dt`` plus an exponential time and then
    applies the jump map.  In stochastic mode the pair amplitude evolves
    over the wait with the full resonant energy, ``x -> e^{2i lam_q dt} x``:
    the real part winds the relative phase while the (finite-size) imaginary
    part damps the pair whenever the grid misses the resonance exactly.
    Fixed/zero phase modes apply the bare map with a constant phase instead.
    Above the critical rate the resonant pair is absent and the trajectory
    stays pinned at the vacuum (``x = inf``), only the waiting times being
    sampled.

    With ``entropy_window`` set, the entropy of a window of that many sites
    is recorded after every jump.
    """
    from .entropy import window_entropy  # local import to avoid a cycle

    rng = np.random.default_rng(cfg.seed)
    resonant = has_resonant_momentum(params)
    state0 = steady_state(params, phi=0.0)
    A, B = complex(state0.A), complex(state0.B)
    events: list[JumpEvent] = []
    total_time = 0.0

    if not resonant:
        rate = jump_rate(params, state0)
        for i in range(cfg.n_jumps):
            tau = sample_waiting_time(rate, rng)
            total_time += cfg.lambda_steps * cfg.dt + tau
            snap = (
                window_entropy(params, state0, entropy_window)
                if entropy_window is not None
                else None
            )
            events.append(
                JumpEvent(index=i, x_before=complex(np.inf), x_after=complex(np.inf),
                          tau=tau, entropy=snap)
            )
        return TrajectoryRecord(events=events, final_A=1.0, final_B=0.0,
                                total_time=total_time, qstar=None)

    C = jump_coefficients(params)
    for i in range(cfg.n_jumps):
        current = SteadyState(A=A, B=B, phi=0.0, qstar=C.qstar)
        rate = jump_rate(params, current)
        tau = sample_waiting_time(rate, rng)
        dt_total = cfg.lambda_steps * cfg.dt + tau
        total_time += dt_total
        if cfg.phase_mode is PhaseMode.STOCHASTIC:
            # evolve through the wait, then jump: phase from Re(lam_q),
            # finite-size damping of the pair from Im(lam_q)
            A = A * np.exp(2j * C.lam_q * dt_total)
            scale = math.hypot(abs(A), abs(B))
            A, B = A / scale, B / scale
            phi = 0.0
        elif cfg.phase_mode is PhaseMode.FIXED:
            phi = cfg.fixed_phi
        else:
            phi = 0.0
        x_before = complex(A / B) if B != 0 else complex(np.inf)
        A, B = _apply_map_pair(A, B, C, phi)
        x_after = complex(A / B) if B != 0 else complex(np.inf)
        snap = None
        if entropy_window is not None:
            snap = window_entropy(
                params, SteadyState(A=A, B=B, phi=0.0, qstar=C.qstar), entropy_window
            )
        events.append(JumpEvent(index=i, x_before=x_before, x_after=x_after,
                                tau=tau, entropy=snap))
    return TrajectoryRecord(events=events, final_A=A, final_B=B,
                            total_time=total_time, qstar=C.qstar)


@dataclass(frozen=True)
class ValidityEstimate:
    """Relaxation-versus-waiting comparison of the rare-jump regime.

    ``lambda_dt`` is the relaxation time needed for all non-resonant modes
    to decay by an order of magnitude, estimated from the linearized gap
    slope with grid spacing ``2 pi / L``; ``lambda_dt_printed`` is the same
    estimate with the slope folded in at half that spacing (the two differ
    by a factor 2 and bracket the direct grid evaluation
    ``lambda_dt_direct = log(10 L)/min|Im lambda|``).  ``tau`` is the mean
    number of steps between clicks ``1/(gamma M dt)`` with
    ``M = sum <1 - n_l>``; ``tau_time = 1/(gamma M)`` is the corresponding
    physical time.  The regime is tagged valid when ``lambda_dt < tau``.
    ``near_critical`` flags estimates within 10% of the critical rate,
    where the linearization underlying all of this breaks down.
    """

    lambda_dt: float
    lambda_dt_printed: float
    lambda_dt_direct: float
    tau: float
    tau_time: float
    valid: bool
    near_critical: bool
    M: float
    L: int


def validity_estimate(
    params: ModelParams, L: int | None = None, dt: float = 0.01
) -> ValidityEstimate:
    """Estimate whether the rare-jump description holds at size ``L``.

    Raises
    ------
    RegimeError
        If ``gamma^2/gamma_c^2 >= 1 - 1/L`` (resonance too close to the
        gap opening for the linearized estimate).
    """
    if L is not None and L != params.L:
        params = ModelParams(kind=params.kind, h=params.h, gamma=params.gamma,
                             L=L, J=params.J, d=params.d, bc=params.bc)
    L = params.L
    gamma_c = critical_gamma(params)
    if gamma_c <= 0 or params.gamma**2 / gamma_c**2 >= 1.0 - 1.0 / L:
        raise RegimeError(
            f"gamma={params.gamma} too close to gamma_c={gamma_c} at L={L}"
        )
    root = math.sqrt(1.0 - params.gamma**2 / gamma_c**2)
    log10l = math.log(10.0 * L)
    lambda_dt = L * log10l * root / (4.0 * math.pi * params.gamma)
    lambda_dt_printed = L * log10l * root / (2.0 * math.pi * params.gamma)

    table = mode_table(params)
    gaps = np.abs(table.lam.imag)
    nonzero = gaps[gaps > 1e-9]
    lambda_dt_direct = float(log10l / np.min(nonzero)) if len(nonzero) else float("inf")

    state = steady_state(params)
    big_m = jump_rate(params, state) / params.gamma
    tau_steps = 1.0 / (params.gamma * big_m * dt)
    tau_time = 1.0 / (params.gamma * big_m)
    return ValidityEstimate(
        lambda_dt=lambda_dt,
        lambda_dt_printed=lambda_dt_printed,
        lambda_dt_direct=lambda_dt_direct,
        tau=tau_steps,
        tau_time=tau_time,
        valid=lambda_dt < tau_steps,
        near_critical=params.gamma > 0.9 * gamma_c,
        M=float(big_m),
        L=L,
    )
