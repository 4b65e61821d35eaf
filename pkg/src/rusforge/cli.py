"""Command-line front end: ``rusforge synth|verify|bench|density|norm-solve``."""

from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from pathlib import Path

from . import __version__
from .angles import Angle, AngleParseError
from .pipeline import SearchParams
from .rng import resolve_seed

log = logging.getLogger("rusforge")

# exception class name -> pipeline stage shown in error messages
_STAGES = {
    "PrecisionExhausted": "relation",
    "IterationCapExceeded": "normalization",
    "NoSolution": "norm-equation",
    "BudgetExceeded": "norm-equation",
    "TCountMismatch": "rus-synthesis",
    "NotEqForm": "rus-synthesis",
    "NoPremultiplier": "rus-synthesis",
    "LowSuccessProbability": "rus-synthesis",
    "ProtocolMismatch": "verify",
}

_ROOT2 = re.compile(r"^\s*([+-]?\d+)?\s*(?:([+-]?)\s*(\d*)\s*\*?\s*sqrt\(?2\)?)?\s*$")


def parse_root2(text: str):
    """``a+b*sqrt2``, ``a+bsqrt2``, ``b*sqrt2`` or ``a``."""
    from .ring import Root2Int

    m = _ROOT2.match(text.replace("√", "sqrt"))
    if not m or not text.strip():
        raise argparse.ArgumentTypeError(f"cannot parse {text!r} as a + b*sqrt2")
    a = int(m.group(1)) if m.group(1) else 0
    b = 0
    if "sqrt" in text or "√" in text:
        b = int(m.group(3)) if m.group(3) else 1
        if m.group(2) == "-":
            b = -b
    return Root2Int(a, b)


def _angle(text: str) -> Angle:
    try:
        return Angle.parse(text)
    except AngleParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _epsilon(text: str) -> float:
    e = float(text)
    if not 0 < e < 1:
        raise argparse.ArgumentTypeError("epsilon must lie in (0, 1)")
    return e


def _params(args, seed: int) -> SearchParams:
    return SearchParams(delta=args.delta, sz=args.sz, p_min=args.pmin, seed=seed)


def _write_json(path: Path, data) -> None:
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")


def _report(proto, theta, eps) -> tuple[dict, bool]:
    from .verify import validate_protocol

    r0, r1 = validate_protocol(proto, theta, eps, raise_on_fail=False)
    ok = r0.matches_expected and r1.matches_expected
    return {"pass": ok, "success": r0.to_json(), "failure": r1.to_json()}, ok


def cmd_synth(args) -> int:
    from .rus2q import synthesize

    seed = resolve_seed(args.seed)
    seed = 0 if seed is None else seed
    try:
        proto, design = synthesize(args.theta, args.epsilon, _params(args, seed), args.variant, args.trace, args.normalization)
    except Exception as exc:
        stage = _STAGES.get(type(exc).__name__, "pipeline")
        print(f"error [{stage}]: {exc}", file=sys.stderr)
        return 2
    report, ok = _report(proto, args.theta, args.epsilon)
    data = proto.to_json()
    data["seed"] = seed
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        _write_json(out / "protocol.json", data)
        (out / "listing.txt").write_text(proto.design.listing() + "\n")
        _write_json(out / "report.json", report)
    print(f"theta            {args.theta}")
    print(f"epsilon          {args.epsilon:g}")
    print(f"distance         {proto.success_distance():.4e}")
    print(f"p                {proto.p:.6f}")
    print(f"design T-count   {proto.design_tcount}")
    print(f"expected T-count {proto.expected_tcount:.3f}")
    print(f"failure          {' '.join(proto.failure_word) or 'I'}")
    print(f"validation       {'pass' if ok else 'FAIL'}")
    if args.verbose:
        print(proto.design.listing())
    return 0 if ok else 1


def cmd_verify(args) -> int:
    from .rus2q import RusProtocol

    data = json.loads(Path(args.protocol).read_text())
    proto = RusProtocol.from_json(data)
    theta = args.theta if args.theta is not None else proto.theta
    eps = args.epsilon if args.epsilon is not None else proto.epsilon
    report, ok = _report(proto, theta, eps)
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(text)
    return 0 if ok else 1


def cmd_bench(args) -> int:
    from .bench import run_bench, summary, to_csv

    try:
        seed = resolve_seed(args.seed, required=True)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    eps = [_epsilon(e) for e in args.epsilons.split(",")]
    rows = run_bench(args.mode, args.count, eps, seed, _params(args, seed), args.variant, args.workers)
    text = to_csv(rows, wall_time=not args.no_wall_time)
    info = summary(rows)
    info["reference"] = "3*log2(1/eps)"
    if args.out:
        Path(args.out).write_text(text)
        Path(args.out).with_suffix(".summary.json").write_text(json.dumps(info, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text)
    print(json.dumps(info, indent=2, sort_keys=True), file=sys.stderr if not args.out else sys.stdout)
    return 0


def cmd_density(args) -> int:
    from .density import density

    rep = density(args.ell, args.red_ell, resolve_seed(args.seed) or 0)
    info = rep.summary()
    if args.out:
        data = dict(info)
        data["blue_points"] = [[v.real, v.imag] for v in rep.blue]
        data["grey_points"] = [[v.real, v.imag] for v in rep.grey]
        data["red_points"] = [[v.real, v.imag] for v in rep.red]
        data["rotation_phases"] = rep.rotations
        _write_json(Path(args.out), data)
    print(json.dumps(info, indent=2, sort_keys=True))
    return 0


def cmd_norm_solve(args) -> int:
    from . import normeq

    xi = args.xi
    fact, y = normeq.solve(xi, args.budget_ms)
    print(f"xi        {xi}")
    print(f"factors   {fact.display()}")
    print(f"verdict   {'easily solvable' if fact.verdict.easily_solvable else 'not easily solvable'} ({fact.verdict.reason})")
    if y is None:
        return 1
    ok = y.abs_squared() == xi
    print(f"y         {y}")
    print(f"check     |y|^2 == xi: {ok}")
    return 0 if ok else 1


def _search_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=None, help="RNG seed (falls back to RUS_FORGE_SEED)")
    p.add_argument("--sz", type=float, default=SearchParams.sz, help="sample size factor")
    p.add_argument("--delta", type=float, default=SearchParams.delta, help="modifier overhead")
    p.add_argument("--pmin", type=float, default=SearchParams.p_min, help="minimum p for --normalization 2")
    p.add_argument("--variant", choices=("auto", "z", "s"), default="auto", help="failure correction")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rusforge", description="Two-qubit repeat-until-success synthesis of z-rotations.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="synthesize a protocol for Rz(theta)")
    p.add_argument("--theta", type=_angle, required=True, help="angle, e.g. pi/64 or 0.3137")
    p.add_argument("--epsilon", type=_epsilon, required=True)
    _search_flags(p)
    p.add_argument("--normalization", type=int, choices=(1, 2), default=1)
    p.add_argument("--trace", action="store_true", help="keep the candidate trace in the JSON")
    p.add_argument("--out", help="directory for protocol.json, listing.txt and report.json")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("verify", help="validate a protocol JSON by exact simulation")
    p.add_argument("protocol")
    p.add_argument("--theta", type=_angle, default=None)
    p.add_argument("--epsilon", type=_epsilon, default=None)
    p.add_argument("--out", help="write the report here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="batch synthesis with CSV output")
    p.add_argument("--mode", choices=("random", "fourier"), default="random")
    p.add_argument("--count", type=int, default=50)
    p.add_argument("--epsilons", default="1e-11,1e-12,1e-13,1e-14,1e-15", help="comma separated")
    _search_flags(p)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--no-wall-time", action="store_true", help="omit wallTimeMs for byte-stable output")
    p.add_argument("--out", help="CSV path (summary goes next to it)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("density", help="enumerate reachable rotations for a denominator exponent")
    p.add_argument("--ell", type=int, default=3)
    p.add_argument("--red-ell", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", help="JSON with the point sets")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("norm-solve", help="solve |y|^2 = xi for xi in Z[sqrt2]")
    p.add_argument("xi", type=parse_root2, help="e.g. 1270080+211680*sqrt2")
    p.add_argument("--budget-ms", type=float, default=SearchParams.budget_ms)
    p.set_defaults(func=cmd_norm_solve)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
