"""Command-line front end: group summaries, character tables and verification reports.

Exit codes: 0 on success or a passing report, 1 when a verification fails,
2 on structural errors (bad family/q/method, group build failures).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import cache
from .errors import StructureError, VerificationError
from .field import FieldSpec
from .groups import FAMILY_ALIASES, GL2, build_group, canonical_family, order_formula
from .jsonfmt import dumps
from .tables import dixon_table, gl2_table
from . import verify

DEFAULT_CACHE = ".genrest-cache"
EXIT_OK, EXIT_FAIL, EXIT_STRUCTURE = 0, 1, 2

log = logging.getLogger("genrest")


@dataclass(frozen=True)
class CommandConfig:
    command: str
    family: str | None
    q: int
    method: str | None = None
    statement: str | None = None
    levi: str = "all"
    out: Path | None = None
    cache_dir: Path | None = None
    timing: bool = False
    verbosity: int = 0

    @classmethod
    def from_args(cls, args) -> "CommandConfig":
        if args.no_cache:
            cache_dir = None
        else:
            cache_dir = Path(args.cache_dir or os.environ.get("GENREST_CACHE") or DEFAULT_CACHE)
        return cls(args.command, args.family, args.q, getattr(args, "method", None),
                   getattr(args, "statement", None), getattr(args, "levi", "all"),
                   args.out, cache_dir, args.timing, args.verbose)


def _q(text: str) -> int:
    try:
        q = int(text)
        FieldSpec.from_order(q)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"q must be a prime power <= 65536: {text!r} ({exc})")
    return q


def _family(text: str) -> str:
    try:
        return canonical_family(text)
    except (KeyError, ValueError):
        raise argparse.ArgumentTypeError(
            f"unknown family {text!r}; choose from {', '.join(sorted(FAMILY_ALIASES))}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=Path, help="write JSON here instead of stdout")
    common.add_argument("--cache-dir", type=Path,
                        help=f"group cache (default: $GENREST_CACHE or ./{DEFAULT_CACHE})")
    common.add_argument("--no-cache", action="store_true", help="do not read or write the cache")
    common.add_argument("--timing", action="store_true", help="record wall time in reports")
    common.add_argument("-v", "--verbose", action="count", default=0)

    ap = argparse.ArgumentParser(prog="genrest", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    info = sub.add_parser("group-info", parents=[common], help="order, classes and subgroup sizes")
    info.add_argument("--family", type=_family, required=True)
    info.add_argument("--q", type=_q, required=True)

    tab = sub.add_parser("table", parents=[common], help="irreducible character table")
    tab.add_argument("--family", type=_family, required=True)
    tab.add_argument("--q", type=_q, required=True)
    tab.add_argument("--method", choices=("closed", "dixon"), default="dixon")

    ver = sub.add_parser("verify", parents=[common], help="run a verification statement")
    ver.add_argument("statement", choices=("rodier", "transfer", "mult-one", "counterexample"))
    ver.add_argument("--family", type=_family, default=None)
    ver.add_argument("--q", type=_q, required=True)
    ver.add_argument("--levi", default="all",
                     choices=("all",) + verify.LEVI_CHOICES)
    return ap


def _configure(cfg: CommandConfig):
    level = logging.WARNING - 10 * min(cfg.verbosity, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    cache.set_cache_dir(cfg.cache_dir)


def _emit(text: str, out: Path | None):
    if out is None:
        sys.stdout.write(text)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text)


def cmd_group_info(family: str, q: int) -> dict:
    G = build_group(family, q)
    sd = G.subgroup_data
    return {
        "family": G.family,
        "q": q,
        "order": G.order,
        "order_formula": order_formula(G.family, q),
        "classes": G.num_classes,
        "B": len(sd.B), "T": len(sd.T), "U": len(sd.U), "Z": len(sd.Z),
        "parabolics": [{"tag": r.tag, "blocks": list(r.blocks), "P": len(r.P),
                        "M": r.M.order, "N": len(r.N)} for r in sd.parabolics],
    }


def cmd_table(family: str, q: int, method: str) -> dict:
    G = build_group(family, q)
    if method == "closed":
        if G.family != GL2:
            raise StructureError(f"closed-form table exists only for GL2, not {G.family}")
        return gl2_table(G).to_json()
    return dixon_table(G).to_json()


_VERIFY_DEFAULT_FAMILY = {"rodier": "GSP4", "transfer": "GSP4", "mult-one": "GSP4"}


def cmd_verify(statement: str, family: str | None, q: int, levi: str = "all"):
    if statement == "counterexample":
        return verify.counterexample_check(q)
    family = family or _VERIFY_DEFAULT_FAMILY[statement]
    if statement == "rodier":
        return verify.rodier_suite(family, q, levi)
    if statement == "transfer":
        return verify.transfer_suite(family, q, levi)
    return verify.multiplicity_one_suite(family, q)


def main(argv=None) -> int:
    cfg = CommandConfig.from_args(build_parser().parse_args(argv))
    _configure(cfg)
    try:
        if cfg.command == "group-info":
            _emit(dumps(cmd_group_info(cfg.family, cfg.q)), cfg.out)
            return EXIT_OK
        if cfg.command == "table":
            _emit(dumps(cmd_table(cfg.family, cfg.q, cfg.method)), cfg.out)
            return EXIT_OK
        report = cmd_verify(cfg.statement, cfg.family, cfg.q, cfg.levi)
        _emit(report.to_json(timing=cfg.timing), cfg.out)
        return EXIT_OK if report.passed else EXIT_FAIL
    except VerificationError as exc:
        log.error("verification failed: %s", exc)
        return EXIT_FAIL
    except (StructureError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_STRUCTURE


if __name__ == "__main__":
    sys.exit(main())
