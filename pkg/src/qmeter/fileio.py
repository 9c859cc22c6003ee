"""Device and scenario files, the scenario runner, and report emission.

Device file (JSON)::

    {"name": "bsc", "n": 2, "m": 2, "kind": "imperfect",
     "gamma": [[[[re, im], ...m], ...], ...],   # n x m x n, gamma[i][j][k]
     "unchecked": false, "metadata": {}}

Scenario file (JSON)::

    {"device": "bsc.json" | {...inline device...},
     "state": [[re, im], ...],                  # optional, default sqrt(1/n) each
     "shots": 100000, "seed": 7,
     "epsilon": 0.05, "delta": 0.1, "epsilon_bits": 1e-9, "exact": false}

Complex numbers are always ``[re, im]`` pairs.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .calibration import estimate_channel, exact_channel, frequency_measurement, interference_gap
from .core import NORM_TOL, PureState
from .device import (DEFAULT_DELTA, KINDS, MeasurementDevice, apply_device,
                     mhi_reliability, pointer_distribution, validate_device)
from .errors import InvalidState, ParseError
from .info import DEFAULT_EPSILON, DEFAULT_EPSILON_BITS, analyze
from .modal import ascription_comparison

DEFAULT_SHOTS = 10_000
SUMMARY_FIELDS = ("device", "n", "m", "R", "E", "N", "mutual", "classification",
                  "reliable", "max_channel_error", "interference_gap")


def _pair(z):
    z = complex(z)
    return [z.real, z.imag]


def _complex(pair, where):
    if (not isinstance(pair, (list, tuple)) or len(pair) != 2
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair)):
        raise ParseError(f"{where}: expected a [re, im] pair, got {pair!r}")
    return complex(float(pair[0]), float(pair[1]))


def _loads(text, what):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed {what}: {exc.msg}", exc.lineno, exc.colno) from None


def device_to_dict(dev: MeasurementDevice) -> dict:
    out = {
        "name": dev.name,
        "n": dev.n,
        "m": dev.m,
        "kind": dev.kind,
        "gamma": [[[_pair(dev.gamma[i, j, k]) for k in range(dev.n)]
                   for j in range(dev.m)] for i in range(dev.n)],
    }
    if dev.unchecked:
        out["unchecked"] = True
    if dev.metadata:
        out["metadata"] = dict(dev.metadata)
    return out


def device_from_dict(obj) -> MeasurementDevice:
    if not isinstance(obj, dict):
        raise ParseError("device must be a JSON object")
    missing = [k for k in ("n", "m", "gamma") if k not in obj]
    if missing:
        raise ParseError(f"device is missing {', '.join(missing)}")
    n, m = obj["n"], obj["m"]
    if not (isinstance(n, int) and isinstance(m, int)) or n < 1 or m < 1:
        raise ParseError(f"n and m must be positive integers, got n={n!r}, m={m!r}")
    raw = obj["gamma"]
    gamma = np.zeros((n, m, n), dtype=complex)
    try:
        if len(raw) != n:
            raise ParseError(f"gamma has {len(raw)} system-out blocks, expected {n}")
        for i in range(n):
            if len(raw[i]) != m:
                raise ParseError(f"gamma[{i}] has {len(raw[i])} pointer rows, expected {m}")
            for j in range(m):
                if len(raw[i][j]) != n:
                    raise ParseError(f"gamma[{i}][{j}] has {len(raw[i][j])} entries, expected {n}")
                for k in range(n):
                    gamma[i, j, k] = _complex(raw[i][j][k], f"gamma[{i}][{j}][{k}]")
    except TypeError:
        raise ParseError("gamma must be nested n x m x n arrays of [re, im] pairs") from None
    kind = obj.get("kind", "generic")
    if kind not in KINDS:
        raise ParseError(f"unknown device kind {kind!r}")
    return MeasurementDevice(gamma, name=str(obj.get("name", "device")), kind=kind,
                             unchecked=bool(obj.get("unchecked", False)),
                             metadata=obj.get("metadata") or None)


def parse_device(text) -> MeasurementDevice:
    """Parse device JSON. Raises ParseError or NotAnIsometry."""
    if hasattr(text, "read"):
        text = text.read()
    return device_from_dict(_loads(text, "device file"))


def serialize_device(dev: MeasurementDevice) -> str:
    return json.dumps(device_to_dict(dev), indent=2) + "\n"


def load_device(path) -> MeasurementDevice:
    return parse_device(Path(path).read_text())


def save_device(dev: MeasurementDevice, path) -> None:
    Path(path).write_text(serialize_device(dev))


def parse_state_pairs(pairs, n=None) -> PureState:
    if not isinstance(pairs, list) or not pairs:
        raise ParseError("state must be a non-empty list of [re, im] pairs")
    amps = [_complex(p, f"state[{i}]") for i, p in enumerate(pairs)]
    if n is not None and len(amps) != n:
        raise ParseError(f"state has {len(amps)} amplitudes, device has n={n}")
    try:
        return PureState(amps)
    except InvalidState as exc:
        raise ParseError(f"state: {exc}") from None


@dataclass
class Scenario:
    device: MeasurementDevice
    state: PureState = None
    shots: int = DEFAULT_SHOTS
    seed: int = None
    epsilon: float = DEFAULT_EPSILON
    delta: float = DEFAULT_DELTA
    epsilon_bits: float = DEFAULT_EPSILON_BITS
    exact: bool = False

    def __post_init__(self):
        if self.state is None:
            self.state = PureState.uniform(self.device.n)


def parse_scenario(text, base_dir=".") -> Scenario:
    if hasattr(text, "read"):
        text = text.read()
    obj = _loads(text, "scenario file")
    if not isinstance(obj, dict) or "device" not in obj:
        raise ParseError("scenario must be an object with a 'device' entry")
    dev = obj["device"]
    if isinstance(dev, str):
        dev = load_device(Path(base_dir) / dev)
    else:
        dev = device_from_dict(dev)
    state = parse_state_pairs(obj["state"], dev.n) if obj.get("state") is not None else None
    kw = {}
    for key, typ in (("shots", int), ("seed", int), ("epsilon", float),
                     ("delta", float), ("epsilon_bits", float), ("exact", bool)):
        if key in obj:
            try:
                kw[key] = typ(obj[key])
            except (TypeError, ValueError):
                raise ParseError(f"scenario field {key!r} has bad value {obj[key]!r}") from None
    if kw.get("shots", 1) < 1:
        raise ParseError("shots must be >= 1")
    return Scenario(dev, state, **kw)


def load_scenario(path) -> Scenario:
    path = Path(path)
    return parse_scenario(path.read_text(), path.parent)


def _finite_or_none(x):
    return None if math.isinf(x) else float(x)


def _matrix(a):
    return [[float(x) for x in row] for row in np.asarray(a)]


def run_scenario(sc: Scenario) -> dict:
    """Run calibration, Shannon analysis, the state-dependent criterion and
    the ascription comparison for one device and state.

    The result holds only JSON-native values, so it survives a JSON round
    trip unchanged.  Sampling is skipped when ``sc.exact`` is set.
    """
    dev, psi = sc.device, sc.state
    validation = validate_device(dev)
    info = analyze(dev, sc.epsilon, sc.epsilon_bits)
    beta = apply_device(dev, psi)

    if sc.exact:
        calib = {"exact": _matrix(exact_channel(dev).probs), "estimated": None,
                 "counts": None, "shots_per_input": None, "seed": None,
                 "max_abs_error": None}
        freqs = None
    else:
        seed = 0 if sc.seed is None else sc.seed
        cr = estimate_channel(dev, sc.shots, seed)
        calib = {"exact": _matrix(cr.exact.probs), "estimated": _matrix(cr.estimated.probs),
                 "counts": [[int(c) for c in row] for row in cr.counts],
                 "shots_per_input": cr.shots_per_input, "seed": cr.seed,
                 "max_abs_error": cr.max_abs_error}
        freqs = [float(f) for f in frequency_measurement(dev, psi, sc.shots, seed)]

    if dev.n == dev.m:
        mhi = mhi_reliability(beta, sc.delta)
        mhi_out = {"ratios": [_finite_or_none(r) for r in mhi.ratios],
                   "reliable": mhi.reliable, "delta": mhi.delta}
    else:
        mhi_out = None

    return {
        "device": {"name": dev.name, "n": dev.n, "m": dev.m, "kind": dev.kind,
                   "unphysical": bool(dev.unchecked or not validation.ok),
                   "isometry_deviation": validation.max_deviation},
        "state": [_pair(a) for a in psi.amplitudes],
        "calibration": calib,
        "info": info.as_dict(),
        "measurement": {"pointer_distribution": [float(p) for p in pointer_distribution(beta)],
                        "frequencies": freqs,
                        "shots": None if sc.exact else sc.shots},
        "mhi": mhi_out,
        "interference_gap": interference_gap(dev, psi),
        "ascription": ascription_comparison(beta).as_dict(),
    }


def summary_row(report: dict) -> dict:
    info = report["info"]
    return {
        "device": report["device"]["name"],
        "n": report["device"]["n"],
        "m": report["device"]["m"],
        "R": info["R"],
        "E": info["E"],
        "N": info["N"],
        "mutual": info["mutual"],
        "classification": info["classification"],
        "reliable": info["channel_reliable"],
        "max_channel_error": report["calibration"]["max_abs_error"],
        "interference_gap": report["interference_gap"],
    }


def emit_report(report, fmt: str = "json") -> str:
    """Render one report (or a list of them) as JSON or as CSV summary rows."""
    if fmt == "json":
        return json.dumps(report, indent=2, allow_nan=False) + "\n"
    if fmt == "csv":
        reports = report if isinstance(report, list) else [report]
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=SUMMARY_FIELDS, lineterminator="\n")
        writer.writeheader()
        for r in reports:
            writer.writerow({k: ("" if v is None else v) for k, v in summary_row(r).items()})
        return buf.getvalue()
    raise ValueError(f"unknown report format {fmt!r}")


def write_output(text: str, out=None) -> None:
    if out in (None, "-"):
        print(text, end="")
    else:
        Path(out).write_text(text)


def env_seed(default: int = 0) -> int:
    raw = os.environ.get("QMETER_SEED")
    return default if raw in (None, "") else int(raw, 0)


def state_is_normalized(amps) -> bool:
    return abs(float(np.sum(np.abs(np.asarray(amps)) ** 2)) - 1.0) <= NORM_TOL
