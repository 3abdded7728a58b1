"""Command-line front end: every command writes deterministic CSV or JSON data.

When ``--out`` is given, a sidecar ``<out>.meta.json`` records the command,
its parameters, the truncation used, the series tolerance and tail bounds.
Exit status: 0 on success, 2 on domain errors, 3 on convergence failures.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .analysis import bell_check, match_crossing, probability_sweep
from .errors import ConvergenceError, DomainError, PhotonSubError
from .fock import FockAmplitudes, photon_distribution, state_from_json
from .named_states import STATE_KINDS, named_state
from .special_functions import DEFAULT_CONTROL, SeriesControl
from .subtraction import SubtractionDecomposition, decompose_output
from .wigner import PhaseSpaceGrid, field_to_csv, wigner_field

TOL_ENV = "PHOTONSUB_TOL"
SQUEEZED_KINDS = ("squeezed-vacuum", "odd-squeezed")


# -- argument parsing helpers -----------------------------------------------

def parse_polar(text: str) -> complex:
    """``"r"`` or ``"r,phase"`` (phase in radians) to a complex number."""
    parts = text.split(",")
    if len(parts) not in (1, 2):
        raise DomainError(f"expected r[,phase], got {text!r}")
    try:
        r = float(parts[0])
        phase = float(parts[1]) if len(parts) == 2 else 0.0
    except ValueError:
        raise DomainError(f"expected r[,phase], got {text!r}") from None
    if r < 0 or not math.isfinite(r) or not math.isfinite(phase):
        raise DomainError(f"magnitude must be finite and non-negative, got {text!r}")
    if phase == 0.0:
        return complex(r, 0.0)
    return complex(r * math.cos(phase), r * math.sin(phase))


def parse_range(text: str) -> list[float]:
    """``"start:stop:step"`` evaluated in exact rationals; ``stop`` is kept when hit exactly."""
    try:
        start, stop, step = (Fraction(p) for p in text.split(":"))
    except ValueError:
        raise DomainError(f"expected start:stop:step, got {text!r}") from None
    if step <= 0:
        raise DomainError(f"range step must be positive, got {text!r}")
    if stop < start:
        raise DomainError(f"range stop below start in {text!r}")
    count = int((stop - start) // step) + 1
    return [float(start + k * step) for k in range(count)]


def parse_int_list(text: str) -> list[int]:
    try:
        values = [int(p) for p in text.split(",")]
    except ValueError:
        raise DomainError(f"expected a comma-separated integer list, got {text!r}") from None
    if any(v < 0 for v in values):
        raise DomainError(f"counts must be non-negative, got {text!r}")
    return values


def parse_pair(text: str) -> tuple[tuple[str, int], tuple[str, int]]:
    """``"kind:n,kind:n"``."""
    try:
        specs = []
        for part in text.split(","):
            kind, n = part.split(":")
            specs.append((kind.strip(), int(n)))
        a, b = specs
    except ValueError:
        raise DomainError(f"expected kind:n,kind:n, got {text!r}") from None
    return a, b


def series_control() -> SeriesControl:
    raw = os.environ.get(TOL_ENV)
    if raw is None:
        return DEFAULT_CONTROL
    try:
        return SeriesControl(rel_tolerance=float(raw))
    except ValueError:
        raise DomainError(f"{TOL_ENV} must be a positive number, got {raw!r}") from None


def _fmt(x: float) -> str:
    return repr(float(x))


def _csv(rows, header) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _param(args, default_key: str) -> complex:
    """State parameter from ``--xi`` or ``--z`` (whichever the state family uses)."""
    text = args.xi if default_key == "xi" else args.z
    if text is None:
        text = args.z if default_key == "xi" else args.xi
    if text is None:
        raise DomainError(f"state {args.state!r} needs --{default_key}")
    return parse_polar(text)


def _state_param_key(kind: str) -> str:
    return "xi" if kind in SQUEEZED_KINDS else "z"


def _require_state(args) -> str:
    if args.state is None:
        raise DomainError(f"--state is required; choose from {', '.join(STATE_KINDS)}")
    return args.state


def _subtract_count(args) -> int:
    if args.subtract is not None:
        if args.subtract < 0:
            raise DomainError(f"--subtract must be non-negative, got {args.subtract}")
        return args.subtract
    if args.n is not None:
        counts = parse_int_list(args.n)
        if len(counts) != 1:
            raise DomainError("this command takes a single subtraction count")
        return counts[0]
    return 0


def _check_trunc(args):
    if args.trunc is not None and args.trunc < 0:
        raise DomainError(f"--trunc must be non-negative, got {args.trunc}")


# -- commands ---------------------------------------------------------------
# Each returns (payload text, metadata dict).

def cmd_prob_curves(args, ctrl):
    kind = args.state or "squeezed-vacuum"
    if kind not in SQUEEZED_KINDS:
        raise DomainError(f"prob-curves supports {SQUEEZED_KINDS}, got {kind!r}")
    counts = parse_int_list(args.n) if args.n is not None else [_subtract_count(args)]
    xs = parse_range(args.xi) if args.xi and ":" in args.xi else [abs(parse_polar(args.xi or "0:0.95:0.05"))]
    curves = {n: probability_sweep(kind, n, xs, ctrl) for n in counts}
    if args.format == "json":
        text = _json({"state": kind, "curves": [
            {"n": n, "xi": [x for x, _ in rows], "p": [p for _, p in rows]}
            for n, rows in curves.items()]})
    elif len(counts) == 1:
        text = _csv(curves[counts[0]], ["xi", "p"])
    else:
        text = _csv([(n, x, p) for n, rows in curves.items() for x, p in rows], ["n", "xi", "p"])
    return text, {"state": kind, "n": counts, "xi": xs, "truncation": None,
                  "note": "closed-form probabilities; no Fock truncation involved"}


def histogram_rows(state: FockAmplitudes):
    return [(k, float(p)) for k, p in enumerate(photon_distribution(state))]


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DomainError(f"cannot read {path}: {exc}") from None


def cmd_histogram(args, ctrl):
    n = _subtract_count(args)
    if args.input is not None:
        obj = _load_json(args.input)
        if isinstance(obj, list):
            dec = SubtractionDecomposition.from_json(obj)
            if n >= len(dec):
                raise DomainError(f"decomposition has idler counts 0..{len(dec) - 1}, asked for {n}")
            entry = dec[n]
            if entry.state is None:
                raise DomainError(f"idler count {n} has zero probability; no conditional state")
            state = entry.state
        else:
            state = state_from_json(obj)
            if not isinstance(state, FockAmplitudes):
                raise DomainError("histogram needs a single-mode state")
        source = {"input": os.path.basename(args.input), "n": n}
    else:
        kind = _require_state(args)
        state = named_state(kind, _param(args, _state_param_key(kind)), n, args.trunc, ctrl)
        source = {"state": kind, "n": n}
    rows = histogram_rows(state)
    if args.format == "json":
        text = _json({"k": [k for k, _ in rows], "p": [p for _, p in rows]})
    else:
        text = _csv(rows, ["k", "p"])
    return text, {**source, "truncation": state.truncation, "tail_mass_bound": state.tail_mass_bound}


def cmd_wigner(args, ctrl):
    kind = _require_state(args)
    n = _subtract_count(args)
    state = named_state(kind, _param(args, _state_param_key(kind)), n, args.trunc, ctrl)
    grid = PhaseSpaceGrid.parse(args.grid) if args.grid else PhaseSpaceGrid()
    field = wigner_field(state, grid)
    if args.format == "json":
        text = _json({"grid": vars(grid), "min_value": field.min_value,
                      "integral_estimate": field.integral_estimate,
                      "values": field.values.tolist()})
    else:
        text = field_to_csv(field)
    return text, {"state": kind, "n": n, "truncation": state.truncation,
                  "tail_mass_bound": state.tail_mass_bound, "grid": vars(grid),
                  "min_value": field.min_value, "integral_estimate": field.integral_estimate,
                  "adequate": field.adequate}


def cmd_bell_check(args, ctrl):
    kind = args.state or "cat-even"
    if kind not in ("cat-even", "cat-odd"):
        raise DomainError(f"bell-check needs --state cat-even or cat-odd, got {kind!r}")
    z = parse_polar(args.z or args.xi or "1")
    report = bell_check(z, "even" if kind == "cat-even" else "odd", args.trunc)
    payload = report.to_json()
    if args.format == "json":
        text = _json(payload)
    else:
        p = report.parity
        text = _csv([("fidelity", report.fidelity),
                     ("fidelity_weighted", report.fidelity_weighted),
                     ("parity_agreement", report.parity_agreement),
                     ("p_even_even", float(p[0, 0])), ("p_even_odd", float(p[0, 1])),
                     ("p_odd_even", float(p[1, 0])), ("p_odd_odd", float(p[1, 1]))],
                    ["quantity", "value"])
    cat = named_state(kind, z, 0, args.trunc)
    return text, {"state": kind, "z": [z.real, z.imag], "truncation": cat.truncation,
                  "tail_mass_bound": cat.tail_mass_bound}


def cmd_subtract(args, ctrl):
    kind = _require_state(args)
    state = named_state(kind, _param(args, _state_param_key(kind)), 0, args.trunc, ctrl)
    dec = decompose_output(state)
    if args.format == "json":
        text = _json(dec.to_json())
    else:
        text = _csv([(e.n, e.probability, e.lambda_n) for e in dec], ["n", "p", "lambda"])
    return text, {"state": kind, "truncation": state.truncation,
                  "tail_mass_bound": state.tail_mass_bound,
                  "probability_sum": float(dec.probabilities.sum())}


def cmd_crossing(args, ctrl):
    if args.target is None or args.pair is None:
        raise DomainError("crossing needs --target and --pair kind:n,kind:n")
    pair = parse_pair(args.pair)
    xi = match_crossing(args.target, pair, trunc=args.trunc, ctrl=ctrl)
    if args.format == "json":
        text = _json({"target": args.target, "pair": [list(p) for p in pair], "xi": xi})
    else:
        text = _csv([(xi,)], ["xi"])
    return text, {"target": args.target, "pair": [list(p) for p in pair],
                  "truncation": args.trunc, "bisection_tolerance": 1e-4}


COMMANDS = {
    "prob-curves": cmd_prob_curves,
    "histogram": cmd_histogram,
    "wigner": cmd_wigner,
    "bell-check": cmd_bell_check,
    "subtract": cmd_subtract,
    "crossing": cmd_crossing,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="photonsub",
        description="Photon subtraction on a 50/50 beam splitter: data for curves, "
                    "histograms, Wigner maps and Bell checks.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--state", choices=STATE_KINDS)
        p.add_argument("--xi", help="squeezing r[,phase] or a start:stop:step range of |xi|")
        p.add_argument("--z", help="coherent amplitude r[,phase]")
        p.add_argument("--subtract", type=int, help="number of photons detected on the idler")
        p.add_argument("--n", help="comma-separated subtraction counts")
        p.add_argument("--trunc", type=int, help="Fock truncation N (default: automatic)")
        p.add_argument("--grid", help="remin:remax:nre,immin:immax:nim")
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        if name == "histogram":
            p.add_argument("--input", help="JSON from `subtract --format json` or a saved state")
        if name == "crossing":
            p.add_argument("--target", type=int, help="Fock level whose probabilities are matched")
            p.add_argument("--pair", help="kind:n,kind:n")
    return parser


_VALUE_FLAGS = ("--grid", "--xi", "--z", "--pair")


def _attach_dash_values(argv: list[str]) -> list[str]:
    """Turn ``--grid -3:3:41,...`` into ``--grid=-3:3:41,...`` so argparse accepts it."""
    out, i = [], 0
    while i < len(argv):
        if argv[i] in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def run(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_attach_dash_values(argv))
    try:
        ctrl = series_control()
        _check_trunc(args)
        text, meta = COMMANDS[args.command](args, ctrl)
    except ConvergenceError as exc:
        print(f"photonsub: convergence failure: {exc}", file=sys.stderr)
        return 3
    except (PhotonSubError, ValueError) as exc:
        print(f"photonsub: domain error: {exc}", file=sys.stderr)
        return 2

    if args.out is None:
        sys.stdout.write(text)
        return 0
    with open(args.out, "w", newline="") as fh:
        fh.write(text)
    meta = {"command": args.command, "version": __version__,
            "series_rel_tolerance": ctrl.rel_tolerance,
            "truncation_tail_tolerance": 1e-12, **meta}
    with open(args.out + ".meta.json", "w") as fh:
        fh.write(_json(_plain(meta)))
    return 0


def _plain(obj):
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def main(argv=None):
    try:
        code = run(argv)
        sys.stdout.flush()
    except BrokenPipeError:
        # reader closed early (e.g. piped into head); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        code = 0
    sys.exit(code)


if __name__ == "__main__":
    main()
