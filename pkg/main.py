import argparse
import logging
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

from sector_verifier.calculus import identity_corpus, load_scripts, mutate, run_script, save_scripts
from sector_verifier.config import Settings, load_settings
from sector_verifier.errors import (
    BackendMismatch,
    ConfigError,
    ConstructionFailed,
    DegenerateGeometry,
    InvalidPoset,
    MalformedScript,
    PreconditionViolated,
    RegionSyntaxError,
)
from sector_verifier.geometry import Tolerance, make_backend, parse_region
from sector_verifier.memory import RunStore
from sector_verifier.posets import Splitting, validate_mdz, validate_reflection, validate_zigzag
from sector_verifier.tools import (
    check_axioms,
    error_status,
    make_report,
    mdz_figure,
    mdz_payload,
    reflection_figure,
    reflection_payload,
    write_report,
    zigzag_figure,
    zigzag_payload,
)
from sector_verifier.zigzag import find_reflection, ga3_zigzag, mdz_between_splittings

logger = logging.getLogger("sector_verifier.cli")

EXIT_OK, EXIT_VIOLATIONS, EXIT_USAGE = 0, 1, 2
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

# Errors in user-supplied arguments or files: exit 2.
USAGE_ERRORS = (
    BackendMismatch,
    ConfigError,
    DegenerateGeometry,
    InvalidPoset,
    MalformedScript,
    PreconditionViolated,
    RegionSyntaxError,
    OSError,
)


class UsageError(Exception):
    pass


def _spread(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError("spread must be >= 0")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="random seed (default: SECTOR_VERIFIER_SEED or 7)")
    common.add_argument("--workers", type=int, help="worker threads (default: SECTOR_VERIFIER_WORKERS or 1)")
    common.add_argument("--store", help="database URL to record the report in")
    common.add_argument("--out", help="report path (default: <output dir>/<command>.json)")
    common.add_argument("--log-level", help="logging level")

    parser = argparse.ArgumentParser(
        prog="sector-verifier",
        description="Zig-zag witnesses in geometric posets and checkable sector-calculus proof scripts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-axioms", parents=[common], help="run the seeded axiom suites on a backend")
    p.add_argument("--backend", required=True, help="interval, cone, cap or finite:<file>")
    p.add_argument("--samples", type=int, help="samples per axiom")
    p.add_argument("--eps", type=float, help="comparison slack in radians")

    region_help = "regions such as 'interval(0,90)', 'cone(0,0,0,90)', 'cap(0,0,1,60)' or 'node(a)'"
    p = sub.add_parser("build-zigzag", parents=[common], help="GA3 zig-zag from PT to PH inside P for Q")
    for name in ("PT", "PH", "P", "Q"):
        p.add_argument(name, help=region_help)
    p.add_argument("--backend", help="backend for the regions (default: from the region form)")
    p.add_argument("--svg", help="also write a figure to this path")

    p = sub.add_parser("build-mdz", parents=[common], help="mutually disjoint zig-zag between two splittings of P")
    for name in ("P", "R1", "S1", "R2", "S2"):
        p.add_argument(name, help=region_help)
    p.add_argument("--backend", help="backend for the regions (default: from the region form)")
    p.add_argument("--svg", help="also write a figure to this path")

    p = sub.add_parser("find-reflection", parents=[common], help="a splitting of P with a reflection")
    p.add_argument("P", help=region_help)
    p.add_argument("--backend", help="backend for the region (default: from the region form)")
    p.add_argument("--svg", help="also write a figure to this path")

    p = sub.add_parser("verify-identities", parents=[common], help="replay proof scripts")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--corpus", help="directory of .script files with a nets/ subdirectory")
    source.add_argument("--all", action="store_true", help="the built-in corpus at spread 0 and at --spread")
    p.add_argument("--spread", type=_spread, default=Fraction(1), help="spread of the second --all instance")
    p.add_argument(
        "--expect",
        choices=("accepted", "rejected"),
        default="accepted",
        help="verdict every script must get for the run to succeed",
    )

    p = sub.add_parser("export-corpus", parents=[common], help="write the built-in corpus to files")
    p.add_argument("DIR", help="target directory")
    p.add_argument("--mutated", action="store_true", help="also write mutated twins to DIR/mutated/")
    p.add_argument("--spread", type=_spread, default=Fraction(1), help="spread of the spread-dependent scripts")
    return parser


def _settings(args: argparse.Namespace) -> Settings:
    overrides = {
        "seed": args.seed,
        "workers": args.workers,
        "log_level": args.log_level,
        "store_url": args.store,
        "samples": getattr(args, "samples", None),
        "eps": getattr(args, "eps", None),
    }
    return load_settings().with_overrides(**overrides)


def _backend(args: argparse.Namespace, settings: Settings, regions: list[str]):
    spec = args.backend
    if spec is None:
        m = re.match(r"^\s*(interval|cone|cap)\s*\(", regions[0])
        if m is None:
            raise UsageError("--backend is required for node(...) regions")
        spec = m.group(1)
    backend = make_backend(spec, Tolerance(eps=settings.eps))
    return backend, [parse_region(text, backend) for text in regions]


def _out(args: argparse.Namespace, settings: Settings) -> Path:
    return Path(args.out) if args.out else Path(settings.output_dir) / f"{args.command}.json"


# commands ---------------------------------------------------------------------------


def cmd_check_axioms(args, settings: Settings) -> dict:
    backend = make_backend(args.backend, Tolerance(eps=settings.eps))
    return check_axioms(backend, settings.samples, settings.seed, settings.workers, label=args.backend)


def _witness_report(command: str, settings: Settings, build) -> dict:
    try:
        payload = build()
    except ConstructionFailed as e:
        logger.debug("construction trace: %s", e.trace)
        return make_report(command, settings.seed, "violations", error=error_status(e))
    return make_report(command, settings.seed, "success", **payload)


def cmd_build_zigzag(args, settings: Settings) -> dict:
    backend, (pt, ph, p, q) = _backend(args, settings, [args.PT, args.PH, args.P, args.Q])

    def build() -> dict:
        zz = ga3_zigzag(backend, pt, ph, p, q)
        report = validate_zigzag(backend, zz, contained_in=p, ga3_for=q)
        if not report.ok:
            raise ConstructionFailed("built zig-zag does not validate", [report.summary()])
        if args.svg:
            zigzag_figure(backend, zz, p).save(args.svg)
        return {"witness": zigzag_payload(backend, zz), "notes": [n.model_dump() for n in report.notes]}

    return _witness_report(args.command, settings, build)


def cmd_build_mdz(args, settings: Settings) -> dict:
    backend, (p, r1, s1, r2, s2) = _backend(args, settings, [args.P, args.R1, args.S1, args.R2, args.S2])

    def build() -> dict:
        swapped, m = mdz_between_splittings(backend, p, Splitting(p, r1, s1), Splitting(p, r2, s2))
        report = validate_mdz(backend, m, contained_in=p)
        if not report.ok:
            raise ConstructionFailed("built zig-zag does not validate", [report.summary()])
        if args.svg:
            mdz_figure(backend, m, p).save(args.svg)
        return {"witness": mdz_payload(backend, m), "swapped": swapped}

    return _witness_report(args.command, settings, build)


def cmd_find_reflection(args, settings: Settings) -> dict:
    backend, (p,) = _backend(args, settings, [args.P])

    def build() -> dict:
        refl = find_reflection(backend, p)
        report = validate_reflection(backend, refl)
        if not report.ok:
            raise ConstructionFailed("reflection does not validate", [report.summary()])
        if args.svg:
            reflection_figure(backend, refl).save(args.svg)
        return {"witness": reflection_payload(backend, refl)}

    return _witness_report(args.command, settings, build)


def cmd_verify_identities(args, settings: Settings) -> dict:
    if args.all:
        pairs = identity_corpus(0)
        if args.spread > 0:
            pairs += identity_corpus(args.spread)
    else:
        root = Path(args.corpus)
        if not root.is_dir():
            raise UsageError(f"no corpus directory {root}")
        pairs = load_scripts(root)
    with ThreadPoolExecutor(max_workers=settings.workers) as pool:
        verdicts = list(pool.map(lambda pair: run_script(*pair), pairs))
    counts = {"accepted": 0, "rejected": 0}
    for v in verdicts:
        counts["accepted" if v.accepted else "rejected"] += 1
    unexpected = len(verdicts) - counts[args.expect]
    logger.info("%d script(s): %d accepted, %d rejected", len(verdicts), counts["accepted"], counts["rejected"])
    return make_report(
        args.command,
        settings.seed,
        "success" if unexpected == 0 else "violations",
        details=f"{len(verdicts)} scripts",
        expect=args.expect,
        **counts,
        scripts=[
            {"name": v.name, "status": v.status, "step": v.step, "reason": v.reason, "notes": v.notes}
            for v in verdicts
        ],
    )


def cmd_export_corpus(args, settings: Settings) -> dict:
    root = Path(args.DIR)
    pairs = identity_corpus(0)
    if args.spread > 0:
        pairs += identity_corpus(args.spread)
    written = save_scripts(pairs, root)
    mutated = []
    if args.mutated:
        twins = [(mutate(script, net), net) for script, net in pairs]
        mutated = save_scripts(twins, root / "mutated")
    logger.info("exported %d script(s) and %d mutated twin(s) to %s", len(written), len(mutated), root)
    return make_report(
        args.command,
        settings.seed,
        "success",
        directory=str(root),
        scripts=[p.name for p in written],
        mutated=[p.name for p in mutated],
    )


COMMANDS = {
    "check-axioms": cmd_check_axioms,
    "build-zigzag": cmd_build_zigzag,
    "build-mdz": cmd_build_mdz,
    "find-reflection": cmd_find_reflection,
    "verify-identities": cmd_verify_identities,
    "export-corpus": cmd_export_corpus,
}


def _record(settings: Settings, command: str, report: dict) -> None:
    if not settings.store_url:
        return
    store = RunStore(settings.store_url).connect()
    try:
        run_id = store.save_run(command, settings.seed, report)
        logger.info("report stored as run %s", run_id)
    finally:
        store.close()


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = _settings(args)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=settings.log_level_number, format=LOG_FORMAT, force=True)
    try:
        report = COMMANDS[args.command](args, settings)
    except (UsageError, *USAGE_ERRORS) as e:
        logger.error("%s: %s", type(e).__name__, e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ConstructionFailed as e:
        # identity_corpus no longer derives one of its scripts
        report = make_report(args.command, settings.seed, "violations", error=error_status(e))
    write_report(report, _out(args, settings))
    _record(settings, args.command, report)
    return EXIT_OK if report["status"] == "success" else EXIT_VIOLATIONS


if __name__ == "__main__":
    sys.exit(main())
