"""Command line front end: ``dim``, ``scan`` and ``verify``.

Variables are numbered from 1 on the command line (x1..xn); the library
itself uses 0-based indices.

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 internal rank anomaly, 4 I/O error.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from typing import Callable, Iterator

from . import oracles
from .ring import DEFAULT_PRIME, FieldConfig
from .scan import ScanRange, format_rows, partitions, run_scan
from .terracini import (
    MonomialSpec,
    RankAnomalyError,
    sample_point,
    secant_dim,
    specialized_secant_dim,
    sum_span,
    tangent_space_basis,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_ANOMALY, EXIT_IO = 0, 1, 2, 3, 4

PRIME_ENV = "TERRACINI_PRIME"


class UsageError(Exception):
    pass


def _default_prime() -> int:
    raw = os.environ.get(PRIME_ENV)
    if raw is None:
        return DEFAULT_PRIME
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{PRIME_ENV}={raw!r} is not an integer") from None


def _field(args) -> FieldConfig:
    prime = args.prime if args.prime is not None else _default_prime()
    try:
        return FieldConfig(prime, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _variables(text: str, n: int) -> tuple[int, ...]:
    idx = tuple(int(t) - 1 for t in text.split(",") if t.strip())
    if any(not 0 <= i < n for i in idx):
        raise UsageError(f"variables {text!r} out of range 1..{n}")
    return idx


def _blocks(text: str, n: int) -> list[tuple[int, tuple[int, ...]]]:
    """Parse ``"2:1,2,3;2:4,5,6"`` into [(2, (0,1,2)), (2, (3,4,5))]."""
    out = []
    for chunk in text.split(";"):
        count, _, variables = chunk.partition(":")
        if not variables:
            raise UsageError(f"block {chunk!r} should look like COUNT:i,j,...")
        out.append((int(count), _variables(variables, n)))
    return out


# -- dim ---------------------------------------------------------------------

def cmd_dim(args) -> int:
    cfg = _field(args)
    try:
        spec = MonomialSpec.parse(args.monomial)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.n < 2 or args.s < 1 or args.trials < 1:
        raise UsageError("need --n >= 2, --s >= 1, --trials >= 1")
    try:
        if args.blocks:
            blocks = _blocks(args.blocks, args.n)
            report = specialized_secant_dim(args.n, spec, args.s, blocks, args.trials, cfg)
        elif args.support:
            blocks = [(args.s, _variables(args.support, args.n))]
            report = specialized_secant_dim(args.n, spec, args.s, blocks, args.trials, cfg)
        else:
            report = secant_dim(args.n, spec, args.s, args.trials, cfg)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(report.summary())
    if args.check_prime is not None:
        try:
            other_cfg = FieldConfig(args.check_prime, args.seed)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if args.blocks or args.support:
            other = specialized_secant_dim(args.n, spec, args.s, blocks, args.trials, other_cfg)
        else:
            other = secant_dim(args.n, spec, args.s, args.trials, other_cfg)
        agree = other.computed_dim == report.computed_dim
        print(f"cross-check over F_{other_cfg.prime}: dim {other.computed_dim} "
              f"({'agrees' if agree else 'DISAGREES'})")
    if args.json:
        text = json.dumps(report.to_dict(), indent=2) + "\n"
        if args.json == "-":
            sys.stdout.write(text)
        else:
            _write(args.json, text)
    return EXIT_OK


# -- scan --------------------------------------------------------------------

def _write(path: str, text: str) -> None:
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise IOError(f"cannot write {path}: {exc}") from exc


def cmd_scan(args) -> int:
    cfg = _field(args)
    try:
        grid = ScanRange(
            n_min=args.n_min, n_max=args.n_max, d_min=args.d_min, d_max=args.d_max,
            r_min=args.r_min, r_max=args.r_max, s_max=args.s_max, s_min=args.s_min,
            trials=args.trials,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rows = run_scan(grid, cfg, jobs=args.jobs)
    text = format_rows(rows, args.format)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        _write(args.out, text)
    defective = [r for r in rows if r.defect]
    print(f"{len(rows)} rows, {len(defective)} defective", file=sys.stderr)
    for row in defective:
        print(f"  defective: n={row.n} M={row.spec} s={row.s} defect={row.defect}", file=sys.stderr)
    return EXIT_OK


# -- verify ------------------------------------------------------------------

Check = tuple[str, Callable[[], bool]]


def _suite_identities(cfg: FieldConfig) -> Iterator[Check]:
    yield "xyz identity 4xyz = x((y+z)^2-(y-z)^2)", lambda: oracles.verify_identity_xyz(cfg.prime)
    yield "nodal cubic normal form", lambda: oracles.verify_nodal_cubic(cfg.prime)


def _suite_binary(cfg: FieldConfig) -> Iterator[Check]:
    for r in range(2, 9):
        yield f"binary claim r={r}", lambda r=r: oracles.verify_binary_claim(r, cfg.rng(1, r), cfg.prime)
    for d in range(3, 11):
        for r in range(2, min(d, 8) + 1):
            for spec in partitions(d, r):
                yield (
                    f"binary tangent M={spec}",
                    lambda spec=spec: oracles.verify_binary_tangent(spec, cfg.rng(2, *spec.exps), cfg.prime),
                )


def _suite_tangent_structure(cfg: FieldConfig) -> Iterator[Check]:
    for n in range(2, 6):
        for d in range(1, 7):
            for r in range(1, d + 1):
                for spec in partitions(d, r):
                    def rank_ok(n=n, spec=spec):
                        pt = sample_point(spec, n, cfg.rng(3, n, *spec.exps), prime=cfg.prime)
                        return tangent_space_basis(pt).rank == spec.r * (n - 1) + 1
                    yield f"tangent rank n={n} M={spec}", rank_ok
    for n in range(2, 5):
        for d in range(2, 7):
            for r in range(2, d + 1):
                for spec in partitions(d, r):
                    yield (
                        f"intersection structure n={n} M={spec}",
                        lambda n=n, spec=spec: oracles.check_tangent_structure(
                            n, spec, cfg.rng(4, n, *spec.exps), cfg.prime),
                    )


def _exceptional_witness(cfg: FieldConfig) -> bool:
    rng = cfg.rng(5)
    a, b = (tangent_space_basis(sample_point((2, 1), 3, rng, prime=cfg.prime)) for _ in range(2))
    return oracles.intersection_dim(a, b) == 1 and sum_span([a, b]).rank == 9


def _suite_secant2(cfg: FieldConfig, trials: int) -> Iterator[Check]:
    yield "exceptional witness: dim(I1 ∩ I2)_3 = 1, dim(I1 + I2)_3 = 9", lambda: _exceptional_witness(cfg)
    yield (
        "negative control: n=3 M=2,1 has 2-defect 1",
        lambda: secant_dim(3, (2, 1), 2, trials, cfg).defect == 1,
    )
    for n in range(3, 6):
        for d in range(3, 9):
            for r in range(2, d + 1):
                for spec in partitions(d, r):
                    want = 1 if (n, spec.exps) == (3, (2, 1)) else 0
                    yield (
                        f"secant line n={n} M={spec} defect {want}",
                        lambda n=n, spec=spec, want=want: secant_dim(n, spec, 2, trials, cfg).defect == want,
                    )


def _suite_specialize(cfg: FieldConfig, trials: int) -> Iterator[Check]:
    yield (
        "extension t=2 n=4 M=5,2 s=2 reaches rank 16",
        lambda: oracles.verify_extension(2, 4, (5, 2), 2, cfg.rng(6), cfg.prime),
    )
    yield (
        "two-variable blocks n=4 M=2,2 s=2 gives dim 13",
        lambda: specialized_secant_dim(4, (2, 2), 2, [(1, (0, 1)), (1, (2, 3))], trials, cfg).computed_dim == 13,
    )
    yield (
        "three-variable blocks n=6 M=2,2 s=4 gives dim 43",
        lambda: specialized_secant_dim(
            6, (2, 2), 4, [(2, (0, 1, 2)), (2, (3, 4, 5))], trials, cfg).computed_dim == 43,
    )
    yield (
        "negative control: M=2,1 pairs in 3-variable blocks stay defective",
        lambda: (
            not oracles.verify_extension(3, 5, (2, 1), 2, cfg.rng(7), cfg.prime)
            and specialized_secant_dim(
                6, (2, 1), 4, [(2, (0, 1, 2)), (2, (3, 4, 5))], trials, cfg).defect > 0
        ),
    )


SUITES = ("identities", "binary", "tangent-structure", "secant2", "specialize")


def _checks(suite: str, cfg: FieldConfig, trials: int) -> Iterator[Check]:
    builders = {
        "identities": lambda: _suite_identities(cfg),
        "binary": lambda: _suite_binary(cfg),
        "tangent-structure": lambda: _suite_tangent_structure(cfg),
        "secant2": lambda: _suite_secant2(cfg, trials),
        "specialize": lambda: _suite_specialize(cfg, trials),
    }
    for name in SUITES if suite == "all" else (suite,):
        for label, check in builders[name]():
            yield f"[{name}] {label}", check


def cmd_verify(args) -> int:
    cfg = _field(args)
    passed = failed = 0
    for label, check in _checks(args.suite, cfg, args.trials):
        ok = bool(check())
        passed += ok
        failed += not ok
        if ok and args.quiet:
            continue
        print(f"{'PASS' if ok else 'FAIL'} {label}")
    print(f"{passed}/{passed + failed} checks passed")
    return EXIT_OK if failed == 0 else EXIT_FAIL


# -- entry point ---------------------------------------------------------------

def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--prime", type=int, default=None,
                   help=f"field modulus (default ${PRIME_ENV} or {DEFAULT_PRIME})")
    p.add_argument("--seed", type=int, default=0, help="master RNG seed (default 0)")
    p.add_argument("--trials", type=int, default=3, help="random samples per case (default 3)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="monomial-secants",
        description="Secant variety dimensions of monomial-shaped products of linear forms.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dim", help="dimension of one secant variety")
    p.add_argument("--n", type=int, required=True, help="number of variables")
    p.add_argument("--monomial", required=True, help="exponents, e.g. 2,1")
    p.add_argument("--s", type=int, required=True, help="number of points")
    p.add_argument("--support", help="restrict all points to these variables, e.g. 1,2")
    p.add_argument("--blocks", help="per-block point counts and variables, e.g. '2:1,2,3;2:4,5,6'")
    p.add_argument("--check-prime", type=int, default=None, metavar="P",
                   help="recompute over a second prime and compare")
    p.add_argument("--json", nargs="?", const="-", metavar="PATH",
                   help="write the report as JSON (stdout when PATH is omitted)")
    _common(p)
    p.set_defaults(func=cmd_dim)

    p = sub.add_parser("scan", help="scan a grid of (n, M, s)")
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, default=4)
    p.add_argument("--d-min", type=int, default=3)
    p.add_argument("--d-max", type=int, default=6)
    p.add_argument("--r-min", type=int, default=2)
    p.add_argument("--r-max", type=int, default=None)
    p.add_argument("--s-min", type=int, default=1)
    p.add_argument("--s-max", type=int, default=None, help="cap on s (default: fill + 1)")
    p.add_argument("--out", default="-", help="output path (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    _common(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=SUITES + ("all",))
    p.add_argument("-q", "--quiet", action="store_true", help="print failures only")
    _common(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RankAnomalyError as exc:
        print(f"internal anomaly: {exc}", file=sys.stderr)
        return EXIT_ANOMALY
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
