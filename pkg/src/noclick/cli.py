"""Command-line front end: parameter scans, trajectories, validity, checks.

Subcommands write one CSV per invocation with a schema comment line, a
header row and 17-significant-digit values; identical seeds produce
byte-identical files.  Scan rows are dispatched to a thread pool
(``--threads`` or ``NOCLICK_THREADS``) and collected in deterministic
order.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import csv
import os
import sys

import numpy as np

from . import __version__
from .entropy import entropy_profile, fit_log_law
from .errors import RegimeError, SimulationError
from .gaussian_state import steady_state, vacuum_state
from .jumps import (
    PhaseMode,
    TrajectoryConfig,
    relaxation_steps,
    run_trajectory,
    validity_estimate,
)
from .model import (
    BoundaryCondition,
    ModelKind,
    ModelParams,
    critical_gamma,
    mode_table,
    spectrum_summary,
)

_SCHEMA = "noclick-csv/1"


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, float):
        return "%.17g" % value
    return str(value)


def _write_csv(path: str, command: str, columns: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(f"# {_SCHEMA} command={command} version={__version__}\n")
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _float_list(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip() != ""]


def _int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip() != ""]


def _read_config(path: str) -> dict[str, str]:
    """Flat key=value config, '#' comments allowed."""
    out: dict[str, str] = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, value = line.split("=", 1)
            out[key.strip()] = value.strip()
    return out


def _threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("NOCLICK_THREADS")
    return max(1, int(env)) if env else 1


def _pool_map(fn, jobs, n_threads: int):
    if n_threads <= 1:
        return [fn(job) for job in jobs]
    with concurrent.futures.ThreadPoolExecutor(max_workers=n_threads) as pool:
        return list(pool.map(fn, jobs))


def _params_product(args) -> list[ModelParams]:
    kind = ModelKind(args.kind)
    bc = BoundaryCondition(args.bc)
    ds = args.d if kind is ModelKind.LONG_RANGE_KITAEV else [None]
    if not (args.gamma and args.h and args.L and ds):
        raise SystemExit("error: empty scan axis (need --gamma, --h, --L, and --d for kitaev)")
    out = []
    for L in args.L:
        for h in args.h:
            for g in args.gamma:
                for d in ds:
                    out.append(ModelParams(kind=kind, h=h, gamma=g, L=L, J=args.J, d=d, bc=bc))
    return out


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="flat key=value config file; flags override it")
    sub.add_argument("--out", required=False, help="output CSV path")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--threads", type=int, default=None,
                     help="worker threads (default: NOCLICK_THREADS or 1)")
    sub.add_argument("--kind", choices=[k.value for k in ModelKind], default="ising")
    sub.add_argument("--bc", choices=[b.value for b in BoundaryCondition], default="abc")
    sub.add_argument("--J", type=float, default=1.0)
    sub.add_argument("--gamma", type=_float_list, default=[])
    sub.add_argument("--h", type=_float_list, default=[])
    sub.add_argument("--d", type=_float_list, default=[])
    sub.add_argument("--L", type=_int_list, default=[])
    sub.add_argument("--LA", type=_int_list, default=[])


def _merge_config(args: argparse.Namespace) -> argparse.Namespace:
    if not args.config:
        return args
    conf = _read_config(args.config)
    casts = {
        "gamma": _float_list, "h": _float_list, "d": _float_list,
        "L": _int_list, "LA": _int_list, "J": float, "seed": int,
        "threads": int, "phases": int, "njumps": int, "ntraj": int,
        "dt": float, "burnin": int,
    }
    defaults = _build_parser().parse_args([args.command])
    for key, raw in conf.items():
        if not hasattr(args, key):
            raise SystemExit(f"error: unknown config key {key!r}")
        current = getattr(args, key)
        default = getattr(defaults, key, None)
        if current == default or current in ([], None):
            value = casts[key](raw) if key in casts else raw
            setattr(args, key, value)
    return args


def cmd_spectrum(args) -> int:
    rows = []
    for params in _params_product(args):
        table = mode_table(params)
        summary = spectrum_summary(params)
        full_k = np.concatenate([-table.ks[::-1], table.ks])
        full_lam = np.concatenate([table.lam[::-1], table.lam])
        for k, lam in zip(full_k, full_lam):
            rows.append([
                params.kind.value, params.J, params.h, params.gamma, params.d,
                params.L, params.bc.value, float(k), float(lam.real), float(lam.imag),
                summary.imaginary_gap, summary.qstar, summary.gamma_c,
            ])
    _write_csv(args.out, "spectrum",
               ["kind", "J", "h", "gamma", "d", "L", "bc", "k", "re_lambda",
                "im_lambda", "imaginary_gap", "qstar", "gamma_c"], rows)
    return 0


def cmd_entropy_scan(args) -> int:
    if not args.LA:
        raise SystemExit("error: empty scan axis --LA")
    jobs = _params_product(args)

    def one(params: ModelParams):
        state = steady_state(params) if args.state == "steady" else vacuum_state(params)
        return entropy_profile(params, state, args.LA,
                               phi_averaged=args.phi_average, n_phases=args.phases)

    rows = []
    for profile in _pool_map(one, jobs, _threads(args)):
        for r in profile:
            rows.append([r.kind, r.J, r.h, r.gamma, r.d, r.L, r.L_A,
                         r.S, r.delta_S, r.c_est, r.phi_averaged])
    _write_csv(args.out, "entropy-scan",
               ["kind", "J", "h", "gamma", "d", "L", "L_A", "S", "delta_S",
                "c_est", "phi_averaged"], rows)
    return 0


def cmd_trajectories(args) -> int:
    if not args.LA:
        raise SystemExit("error: --LA required for entropy snapshots")
    ell = args.LA[0]
    jobs = _params_product(args)
    rows = []
    for params in jobs:
        if params.gamma >= critical_gamma(params):
            print(f"warning: gamma={params.gamma} >= gamma_c={critical_gamma(params):.6g}; "
                  f"trajectories pinned at the vacuum", file=sys.stderr)

        steps = (relaxation_steps(params, args.dt)
                 if args.lambda_steps == "auto" else int(args.lambda_steps))

        def one(traj_index: int, params=params, steps=steps):
            cfg = TrajectoryConfig(
                dt=args.dt, seed=args.seed + traj_index, n_jumps=args.njumps,
                lambda_steps=steps, phase_mode=PhaseMode(args.phase_mode),
                fixed_phi=args.fixed_phi,
            )
            return run_trajectory(params, cfg, entropy_window=ell)

        records = _pool_map(one, range(args.ntraj), _threads(args))
        snaps = []
        for t_index, record in enumerate(records):
            for ev in record.events:
                rows.append(["jump", params.kind.value, params.h, params.gamma,
                             params.L, t_index, ev.index, ev.tau,
                             _c(ev.x_before.real), _c(ev.x_before.imag),
                             _c(ev.x_after.real), _c(ev.x_after.imag), ell, ev.entropy])
                if ev.index >= args.burnin and ev.entropy is not None:
                    snaps.append(ev.entropy)
        mean_s = float(np.mean(snaps)) if snaps else None
        rows.append(["ensemble", params.kind.value, params.h, params.gamma,
                     params.L, None, None, None, None, None, None, None, ell, mean_s])
    _write_csv(args.out, "trajectories",
               ["row_type", "kind", "h", "gamma", "L", "trajectory", "jump_index",
                "tau", "re_x_before", "im_x_before", "re_x_after", "im_x_after",
                "L_A", "S"], rows)
    return 0


def _c(x: float) -> float | None:
    return None if np.isinf(x) or np.isnan(x) else float(x)


def cmd_validity(args) -> int:
    rows = []
    for params in _params_product(args):
        try:
            est = validity_estimate(params, dt=args.dt)
        except RegimeError as exc:
            print(f"warning: skipping L={params.L} gamma={params.gamma}: {exc}",
                  file=sys.stderr)
            continue
        rows.append([params.L, params.gamma, params.h, est.lambda_dt,
                     est.lambda_dt_printed, est.lambda_dt_direct, est.tau,
                     est.tau_time, est.M, est.valid, est.near_critical])
    _write_csv(args.out, "validity",
               ["L", "gamma", "h", "lambda_dt", "lambda_dt_printed",
                "lambda_dt_direct", "tau", "tau_time", "M", "valid",
                "near_critical"], rows)
    return 0


def cmd_oracle_check(args) -> int:
    """Cross-check the Gaussian machinery against the dense oracle."""
    from .entropy import window_entropy
    from .gaussian_state import majorana_correlation
    from .oracle import build_dense_hamiltonian, dense_vacuum, majorana_matrix, reduced_entropy

    rng = np.random.default_rng(args.seed)
    failures = 0
    checks = 0
    for _ in range(args.samples):
        h = float(rng.uniform(0.0, 1.5))
        g = float(rng.uniform(0.0, 6.0))
        for L in (4, 6):
            for kind, d in ((ModelKind.ISING, None), (ModelKind.LONG_RANGE_KITAEV, 0.5),
                            (ModelKind.LONG_RANGE_KITAEV, 1.7)):
                params = ModelParams(kind=kind, h=h, gamma=g, L=L, d=d)
                psi = dense_vacuum(build_dense_hamiltonian(params))
                M_dense = majorana_matrix(psi)
                M_gauss = majorana_correlation(vacuum_state(params), params, (0, L)).matrix
                err_m = float(np.max(np.abs(M_dense - M_gauss)))
                ell = L // 2
                err_s = abs(reduced_entropy(psi, (0, ell))
                            - window_entropy(params, vacuum_state(params), ell))
                checks += 1
                if err_m > 1e-8 or err_s > 1e-6:
                    failures += 1
                    print(f"FAIL kind={kind.value} d={d} L={L} h={h:.4f} gamma={g:.4f} "
                          f"|dM|={err_m:.2e} |dS|={err_s:.2e}")
    print(f"oracle-check: {checks - failures}/{checks} passed")
    return 1 if failures else 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="noclick",
        description="Monitored free-fermion chains in the no-click limit",
    )
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    sp = subs.add_parser("spectrum", help="per-momentum spectrum tables")
    _add_common(sp)

    se = subs.add_parser("entropy-scan", help="entropy scaling tables")
    _add_common(se)
    se.add_argument("--state", choices=["vacuum", "steady"], default="vacuum")
    se.add_argument("--phi-average", action="store_true")
    se.add_argument("--phases", type=int, default=64)

    st = subs.add_parser("trajectories", help="rare-jump trajectory ensembles")
    _add_common(st)
    st.add_argument("--ntraj", type=int, default=10)
    st.add_argument("--njumps", type=int, default=50)
    st.add_argument("--burnin", type=int, default=10)
    st.add_argument("--dt", type=float, default=0.01)
    st.add_argument("--lambda-steps", dest="lambda_steps", default="auto",
                    help="relaxation steps per cycle; integer or 'auto'")
    st.add_argument("--phase-mode", choices=[m.value for m in PhaseMode],
                    default="stochastic")
    st.add_argument("--fixed-phi", type=float, default=0.0)

    sv = subs.add_parser("validity", help="rare-jump validity estimates")
    _add_common(sv)
    sv.add_argument("--dt", type=float, default=0.01)

    so = subs.add_parser("oracle-check", help="dense-oracle cross checks")
    _add_common(so)
    so.add_argument("--samples", type=int, default=10)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    args = _merge_config(args)
    if args.command != "oracle-check" and not args.out:
        parser.error("--out is required")
    handlers = {
        "spectrum": cmd_spectrum,
        "entropy-scan": cmd_entropy_scan,
        "trajectories": cmd_trajectories,
        "validity": cmd_validity,
        "oracle-check": cmd_oracle_check,
    }
    try:
        return handlers[args.command](args)
    except SimulationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
