"""Command-line front end.

Subcommands:

    fidelity    Uhlmann fidelity and Bures distance between two state files
    qfi         exact and numeric-oracle QFI of a probe under a channel
    channel     reduced post-channel state of a probe
    sweep-fig1  zero-temperature one-mode sweep CSV over (tau, r)
    sweep-fig2  two-mode sweep CSV over (tau, r, nu1, nu2)
    validate    invariant checks on state/channel files

State files carry {"n_modes", "d_re", "d_im", "sigma_re", "sigma_im"};
channel files carry either explicit coefficient matrices
{"N", "alpha_re", "alpha_im", "beta_re", "beta_im"} or a builtin descriptor
{"builtin": "cavity", "tau": ..., "a": ..., "N": ...} /
{"builtin": "identity", "N": ...}.

Exit codes: 1 validation failure, 2 regime violation without --force,
3 I/O errors.  Errors are reported as one JSON object on stderr.
Set GQFI_LOG to a logging level name for diagnostics.
"""

import argparse
import itertools
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import cavity as cavity_mod
from .bogoliubov import BogoliubovTransform, apply_channel
from .cavity import CavityScenario, cavity_channel, write_sweep_csv
from .errors import GqfiError, RegimeError, UnphysicalStateError
from .fidelity import bures_distance, fidelity
from .gaussian_core import GaussianState
from .qfi import StateCurve, qfi_exact, qfi_numeric

log = logging.getLogger("gqfi")

EXIT_VALIDATION = 1
EXIT_REGIME = 2
EXIT_IO = 3


def _fail(code, exc):
    payload = {"error": type(exc).__name__, "message": str(exc)}
    print(json.dumps(payload), file=sys.stderr)
    raise SystemExit(code)


def _load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        _fail(EXIT_IO, exc)


def _load_state(path, tol):
    data = _load_json(path)
    try:
        state = GaussianState.from_json_dict(data)
        state.validate(tol)
    except (KeyError, ValueError, UnphysicalStateError) as exc:
        _fail(EXIT_VALIDATION, exc)
    return state


def _load_channel(path):
    """Returns (kind, payload): ('cavity', scenario) | ('fixed', transform)."""
    data = _load_json(path)
    try:
        if data.get("builtin") == "cavity":
            sc = CavityScenario(tau=float(data["tau"]), a=float(data.get("a", 0.0)),
                                n_trunc=int(data.get("N", cavity_mod.DEFAULT_N)))
            return "cavity", sc
        if data.get("builtin") == "identity":
            return "fixed", BogoliubovTransform.identity(int(data["N"]))
        if "alpha_re" in data:
            alpha = np.array(data["alpha_re"], dtype=float) + 1j * np.array(
                data.get("alpha_im", np.zeros_like(data["alpha_re"])), dtype=float)
            beta = np.array(data["beta_re"], dtype=float) + 1j * np.array(
                data.get("beta_im", np.zeros_like(data["beta_re"])), dtype=float)
            return "fixed", BogoliubovTransform(alpha, beta)
    except (KeyError, ValueError) as exc:
        _fail(EXIT_VALIDATION, exc)
    _fail(EXIT_VALIDATION, ValueError(f"unrecognized channel descriptor in {path}"))


def _emit(payload, out_path):
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out_path:
        try:
            with open(out_path, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            _fail(EXIT_IO, exc)
    else:
        sys.stdout.write(text)


def _parse_floats(text):
    return [float(x) for x in text.split(",") if x != ""]


def _parse_grid(text):
    """'start:stop:step' inclusive grid, or a comma list."""
    if ":" in text:
        start, stop, step = (float(x) for x in text.split(":"))
        return np.arange(start, stop + step / 2, step)
    return np.array(_parse_floats(text))


def _parse_pairs(text):
    pairs = []
    for chunk in text.split(","):
        a, b = chunk.split(":")
        pairs.append((float(a), float(b)))
    return tuple(pairs)


def _system_modes(args, probe):
    if args.modes:
        modes = [int(x) for x in args.modes.split(",")]
    else:
        modes = list(range(probe.n_modes))
    if len(modes) != probe.n_modes:
        _fail(EXIT_VALIDATION, ValueError(
            f"state has {probe.n_modes} modes but {len(modes)} system modes given"))
    return modes


def cmd_fidelity(args):
    s1 = _load_state(args.a, args.tol)
    s2 = _load_state(args.b, args.tol)
    f = fidelity(s1, s2)
    _emit({"fidelity": f, "bures_distance": bures_distance(s1, s2)}, args.out)
    return 0


def cmd_qfi(args):
    probe = _load_state(args.state, args.tol)
    kind, channel = _load_channel(args.channel)
    modes = _system_modes(args, probe)
    if kind == "cavity":
        eps0 = channel.a

        def evaluate(a):
            sc = CavityScenario(tau=channel.tau, a=a, n_trunc=channel.n_trunc)
            transform = cavity_channel(sc).transform_at(a)
            return apply_channel(probe, transform, modes, args.env_nu).reduced_state

        curve = StateCurve(evaluate)
        exact = qfi_exact(curve.state(eps0), curve.sigma_dot(eps0))
        numeric = qfi_numeric(curve, eps0, d_eps=args.d_eps)
    else:
        # a fixed transform does not depend on the estimation parameter
        reduced = apply_channel(probe, channel, modes, args.env_nu).reduced_state
        exact = qfi_exact(reduced, np.zeros_like(reduced.sigma))
        curve = StateCurve(lambda _eps: reduced)
        numeric = qfi_numeric(curve, 0.0, d_eps=args.d_eps)
    _emit(
        {
            "H_exact": exact.value,
            "H_numeric": numeric.value,
            "difference": exact.value - numeric.value,
            "numeric_error_estimate": numeric.error_estimate,
            "pure_branch": exact.pure_branch,
        },
        args.out,
    )
    return 0


def cmd_channel(args):
    probe = _load_state(args.state, args.tol)
    kind, channel = _load_channel(args.channel)
    modes = _system_modes(args, probe)
    transform = (cavity_channel(channel).transform_at(channel.a)
                 if kind == "cavity" else channel)
    result = apply_channel(probe, transform, modes, args.env_nu)
    _emit(result.reduced_state.to_json_dict(), args.out)
    return 0


def _fig1_chunk(chunk_args):
    taus, r_values, m, n_trunc = chunk_args
    return cavity_mod.fig1_sweep(r_values=r_values, tau_grid=taus, m=m, n_trunc=n_trunc)


def _fig2_chunk(chunk_args):
    taus, nu_pairs, r_values, m, n, n_trunc = chunk_args
    return cavity_mod.fig2_sweep(nu_pairs=nu_pairs, r_values=r_values, tau_grid=taus,
                                 m=m, n=n, n_trunc=n_trunc)


def _run_chunks(worker, chunk_args_list, jobs):
    if jobs <= 1:
        results = [worker(c) for c in chunk_args_list]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(worker, chunk_args_list))
    return [row for chunk in results for row in chunk]


def cmd_sweep_fig1(args):
    taus = _parse_grid(args.tau)
    rs = tuple(_parse_floats(args.r))
    chunks = np.array_split(taus, max(args.jobs, 1))
    rows = _run_chunks(_fig1_chunk, [(c, rs, args.m, args.N) for c in chunks if len(c)],
                       args.jobs)
    write_sweep_csv(rows, args.out)
    log.info("wrote %d rows to %s", len(rows), args.out)
    return 0


def cmd_sweep_fig2(args):
    taus = _parse_grid(args.tau)
    rs = tuple(_parse_floats(args.r))
    if args.nu_pairs:
        pairs = _parse_pairs(args.nu_pairs)
    elif args.nu:
        nus = sorted(_parse_floats(args.nu))
        pairs = tuple(itertools.combinations_with_replacement(nus, 2))
    else:
        pairs = ((1.0, 1.0), (2.0, 2.0), (2.0, 6.0), (2.0, 10.0), (6.0, 6.0),
                 (6.0, 10.0), (10.0, 10.0))
    chunks = np.array_split(taus, max(args.jobs, 1))
    try:
        rows = _run_chunks(_fig2_chunk,
                           [(c, pairs, rs, args.m, args.n, args.N) for c in chunks if len(c)],
                           args.jobs)
    except RegimeError as exc:
        _fail(EXIT_REGIME, exc)
    write_sweep_csv(rows, args.out)
    log.info("wrote %d rows to %s", len(rows), args.out)
    return 0


def cmd_validate(args):
    report = {}
    if args.state:
        state = _load_state(args.state, args.tol)
        report["state"] = {
            "n_modes": state.n_modes,
            "min_physicality_eigenvalue": state.min_physicality_eigenvalue(),
        }
    if args.channel:
        kind, channel = _load_channel(args.channel)
        transform = (cavity_channel(channel).transform_at(channel.a)
                     if kind == "cavity" else channel)
        r1, r2 = transform.check_identities()
        report["channel"] = {"identity_residuals": [r1, r2], "N": transform.n_modes}
        if max(r1, r2) > args.channel_tol:
            report["channel"]["within_tolerance"] = False
            _emit(report, args.out)
            _fail(EXIT_VALIDATION, GqfiError(
                f"identity residuals ({r1:.3e}, {r2:.3e}) exceed {args.channel_tol:.1e}"))
        report["channel"]["within_tolerance"] = True
    _emit(report, args.out)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gqfi",
        description="Precision bounds for Gaussian probes under Bogoliubov channels",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--tol", type=float, default=1e-10,
                       help="state validation tolerance")

    p = sub.add_parser("fidelity", help="fidelity and Bures distance of two states")
    p.add_argument("--a", required=True, help="first state JSON")
    p.add_argument("--b", required=True, help="second state JSON")
    common(p)
    p.set_defaults(func=cmd_fidelity)

    p = sub.add_parser("qfi", help="exact and numeric QFI of a probe under a channel")
    p.add_argument("--state", required=True)
    p.add_argument("--channel", required=True)
    p.add_argument("--modes", help="system mode indices, e.g. 0,1")
    p.add_argument("--env-nu", type=float, default=1.0)
    p.add_argument("--d-eps", type=float, default=1e-3,
                   help="step for the numeric fidelity-limit oracle")
    common(p)
    p.set_defaults(func=cmd_qfi)

    p = sub.add_parser("channel", help="reduced post-channel state of a probe")
    p.add_argument("--state", required=True)
    p.add_argument("--channel", required=True)
    p.add_argument("--modes")
    p.add_argument("--env-nu", type=float, default=1.0)
    common(p)
    p.set_defaults(func=cmd_channel)

    p = sub.add_parser("sweep-fig1", help="one-mode zero-temperature sweep CSV")
    p.add_argument("--r", default="0,0.5,1,1.5,2", help="comma list of squeezings")
    p.add_argument("--tau", default="0:6:0.01", help="grid start:stop:step or comma list")
    p.add_argument("--m", type=int, default=1, help="probe mode number (1-based)")
    p.add_argument("--N", type=int, default=cavity_mod.DEFAULT_N)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep_fig1)

    p = sub.add_parser("sweep-fig2", help="two-mode temperature-pair sweep CSV")
    p.add_argument("--r", default="0,0.5,1,1.5,2")
    p.add_argument("--tau", default="0:6:0.01")
    p.add_argument("--nu", help="comma list; all unordered pairs are swept")
    p.add_argument("--nu-pairs", help="explicit pairs, e.g. 1:1,2:6,2:10")
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--N", type=int, default=cavity_mod.DEFAULT_N)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--force", action="store_true",
                   help="evaluate outside regime validity windows")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep_fig2)

    p = sub.add_parser("validate", help="invariant checks on inputs")
    p.add_argument("--state")
    p.add_argument("--channel")
    p.add_argument("--channel-tol", type=float, default=1e-8,
                   help="acceptable identity residual for the channel")
    common(p)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None):
    level = os.environ.get("GQFI_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING))
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except RegimeError as exc:
        _fail(EXIT_REGIME, exc)
    except GqfiError as exc:
        _fail(EXIT_VALIDATION, exc)
    except OSError as exc:
        _fail(EXIT_IO, exc)


if __name__ == "__main__":
    sys.exit(main())
