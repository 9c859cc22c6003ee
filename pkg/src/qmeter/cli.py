"""Command-line front end.

Exit codes: 0 success, 1 usage or parse error, 2 unphysical device,
3 numerical inconsistency.
"""
from __future__ import annotations

import argparse
import json
import math
import re
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .calibration import estimate_channel, exact_channel, frequency_measurement
from .core import PureState
from .device import (DEFAULT_DELTA, apply_device, bsc_device, interference_device,
                     make_disturbing, make_ideal, mhi_reliability, pointer_distribution)
from .errors import NotAnIsometry, NumericalInconsistency, ParseError, QMeterError
from .fileio import (DEFAULT_SHOTS, Scenario, emit_report, env_seed, load_device,
                     load_scenario, run_scenario, save_device, write_output)
from .info import DEFAULT_EPSILON, DEFAULT_EPSILON_BITS
from .kernels import BACKEND

EXIT_OK, EXIT_USAGE, EXIT_UNPHYSICAL, EXIT_NUMERICAL = 0, 1, 2, 3

_BARE_UNIT = re.compile(r"(^|[+-])j$")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_complex(token: str) -> complex:
    """Parse ``a``, ``bi``, ``a+bi`` or ``a-bi`` (``j`` accepted for ``i``)."""
    t = token.strip().replace(" ", "").replace("i", "j")
    t = _BARE_UNIT.sub(lambda mt: mt.group(1) + "1j", t)
    try:
        return complex(t)
    except ValueError:
        raise ParseError(f"cannot parse complex amplitude {token!r}") from None


def parse_state_flag(text: str, n: int) -> PureState:
    """Comma-separated amplitudes, rescaled to unit norm."""
    amps = [parse_complex(tok) for tok in text.split(",")]
    if len(amps) != n:
        raise ParseError(f"--state has {len(amps)} amplitudes, device has n={n}")
    if not any(amps):
        raise ParseError("--state is the zero vector")
    return PureState.normalized(amps)


def _add_common(p, *, shots=True, state=False):
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    p.add_argument("--epsilon", type=float, default=None,
                   help=f"channel triviality tolerance (default {DEFAULT_EPSILON})")
    p.add_argument("--epsilon-bits", type=float, default=None,
                   help=f"classification tolerance in bits (default {DEFAULT_EPSILON_BITS})")
    p.add_argument("--delta", type=float, default=None,
                   help=f"threshold for the state-dependent criterion (default {DEFAULT_DELTA})")
    if shots:
        p.add_argument("--shots", type=int, default=None,
                       help=f"shots per input (default {DEFAULT_SHOTS})")
        p.add_argument("--seed", type=lambda s: int(s, 0), default=None,
                       help="RNG seed (default $QMETER_SEED or 0)")
        p.add_argument("--exact", action="store_true", help="skip sampling")
    if state:
        p.add_argument("--state", default=None,
                       help="amplitudes as a+bi,... (rescaled to unit norm; default uniform)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qmeter",
                     description="Analyze quantum measuring devices as Shannon channels.")
    parser.add_argument("--version", action="version",
                        version=f"qmeter {__version__} ({BACKEND} kernels)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("calibrate", help="estimate a device's channel matrix")
    p.add_argument("--device", required=True)
    _add_common(p)

    p = sub.add_parser("measure", help="frequency measurement of a state")
    p.add_argument("--device", required=True)
    _add_common(p, state=True)

    p = sub.add_parser("analyze", help="Shannon analysis and reliability index")
    p.add_argument("--device", required=True)
    _add_common(p, state=True)

    p = sub.add_parser("compare", help="rank devices by reliability index")
    p.add_argument("devices", nargs="*", metavar="DEVICE")
    p.add_argument("--device", action="append", default=[], dest="device_flags")
    _add_common(p)

    p = sub.add_parser("run", help="run a scenario file")
    p.add_argument("scenario")
    _add_common(p, state=True)

    p = sub.add_parser("demo", help="showcase devices: ideal, binary symmetric, "
                                    "disturbing, interference")
    _add_common(p)
    p.add_argument("--sweep", type=int, default=None, metavar="POINTS",
                   help="instead, sweep the binary symmetric family over q in [0, 0.5]")
    p.add_argument("--save-dir", default=None, help="also write the demo device files here")
    return parser


def _scenario(dev, args, state=None, base=None) -> Scenario:
    base = base or Scenario(dev)
    if getattr(args, "seed", None) is not None:
        seed = args.seed
    else:
        seed = base.seed if base.seed is not None else env_seed()
    return Scenario(
        device=dev,
        state=state if state is not None else base.state,
        shots=args.shots if getattr(args, "shots", None) is not None else base.shots,
        seed=seed,
        epsilon=args.epsilon if args.epsilon is not None else base.epsilon,
        delta=args.delta if args.delta is not None else base.delta,
        epsilon_bits=args.epsilon_bits if args.epsilon_bits is not None else base.epsilon_bits,
        exact=bool(getattr(args, "exact", False)) or base.exact,
    )


def _state(args, dev):
    text = getattr(args, "state", None)
    return parse_state_flag(text, dev.n) if text else None


def demo_devices():
    theta = math.pi / 5
    return [
        make_ideal(2, name="ideal"),
        bsc_device(0.1, name="bsc-q0.1"),
        make_disturbing(2, [[1, 0], [math.sin(theta), math.cos(theta)]], name="disturbing"),
        interference_device(0.25, name="interference-q0.25"),
    ]


def _cmd_calibrate(args):
    dev = load_device(args.device)
    sc = _scenario(dev, args, base=Scenario(dev))
    exact = exact_channel(dev)
    if sc.exact:
        est, counts, err = None, None, None
    else:
        cr = estimate_channel(dev, sc.shots, sc.seed)
        est, counts, err = cr.estimated.probs, cr.counts, cr.max_abs_error
    if args.format == "csv":
        lines = ["input,output,exact,estimated,count"]
        for k in range(dev.n):
            for j in range(dev.m):
                e = "" if est is None else repr(float(est[k, j]))
                c = "" if counts is None else str(int(counts[k, j]))
                lines.append(f"{exact.input_labels[k]},{exact.output_labels[j]},"
                             f"{float(exact.probs[k, j])!r},{e},{c}")
        return "\n".join(lines) + "\n"
    return emit_report({
        "device": dev.name,
        "exact": exact.probs.tolist(),
        "estimated": None if est is None else est.tolist(),
        "counts": None if counts is None else counts.tolist(),
        "shots_per_input": None if sc.exact else sc.shots,
        "seed": None if sc.exact else sc.seed,
        "max_abs_error": err,
    })


def _cmd_measure(args):
    dev = load_device(args.device)
    sc = _scenario(dev, args, _state(args, dev), base=Scenario(dev))
    beta = apply_device(dev, sc.state)
    dist = pointer_distribution(beta)
    freqs = None if sc.exact else frequency_measurement(dev, sc.state, sc.shots, sc.seed)
    if args.format == "csv":
        lines = ["output,probability,frequency"]
        for j in range(dev.m):
            f = "" if freqs is None else repr(float(freqs[j]))
            lines.append(f"{beta.pointer_labels[j]},{float(dist[j])!r},{f}")
        return "\n".join(lines) + "\n"
    out = {"device": dev.name,
           "state": [[a.real, a.imag] for a in sc.state.amplitudes],
           "pointer_distribution": dist.tolist(),
           "frequencies": None if freqs is None else freqs.tolist(),
           "shots": None if sc.exact else sc.shots,
           "seed": None if sc.exact else sc.seed}
    if dev.n == dev.m:
        mhi = mhi_reliability(beta, sc.delta)
        out["mhi"] = {"ratios": [None if math.isinf(r) else float(r) for r in mhi.ratios],
                      "reliable": mhi.reliable, "delta": mhi.delta}
    return emit_report(out)


def _cmd_analyze(args):
    dev = load_device(args.device)
    sc = _scenario(dev, args, _state(args, dev), base=Scenario(dev, exact=True))
    return emit_report(run_scenario(sc), args.format)


def _cmd_compare(args):
    paths = list(args.devices) + list(args.device_flags)
    if not paths:
        raise ParseError("compare needs at least one device file")
    reports = []
    for path in paths:
        dev = load_device(path)
        reports.append(run_scenario(_scenario(dev, args, base=Scenario(dev))))
    reports.sort(key=lambda r: -r["info"]["R"])
    return emit_report(reports, args.format)


def _cmd_run(args):
    base = load_scenario(args.scenario)
    sc = _scenario(base.device, args, _state(args, base.device), base=base)
    return emit_report(run_scenario(sc), args.format)


def _cmd_demo(args):
    if args.sweep is not None:
        if args.sweep < 2:
            raise ParseError("--sweep needs at least 2 points")
        devices = [bsc_device(float(q), name=f"bsc-q{q:.6g}")
                   for q in np.linspace(0.0, 0.5, args.sweep)]
    else:
        devices = demo_devices()
    if args.save_dir:
        Path(args.save_dir).mkdir(parents=True, exist_ok=True)
        for dev in devices:
            save_device(dev, Path(args.save_dir) / f"{dev.name}.json")
    reports = [run_scenario(_scenario(d, args)) for d in devices]
    return emit_report(reports, args.format)


COMMANDS = {
    "calibrate": _cmd_calibrate,
    "measure": _cmd_measure,
    "analyze": _cmd_analyze,
    "compare": _cmd_compare,
    "run": _cmd_run,
    "demo": _cmd_demo,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = COMMANDS[args.command](args)
        write_output(text, args.out)
    except NotAnIsometry as exc:
        print(f"qmeter: unphysical device: {exc}", file=sys.stderr)
        return EXIT_UNPHYSICAL
    except NumericalInconsistency as exc:
        print(f"qmeter: numerical inconsistency: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (QMeterError, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"qmeter: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
