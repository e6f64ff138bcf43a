"""Command-line front end.

Subcommands ``invariants``, ``enumerate``, ``orbital``, ``strata`` and
``verify-fl`` run one configuration; ``corpus`` runs the golden suite
shipped with the package (or every ``*.toml`` in ``--corpus DIR``).

Exit codes: 0 success, 2 configuration error, 3 precision or budget
exhausted, 4 identity violation or mismatch with ``[expected]``.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from importlib import resources
from pathlib import Path

from .config import ConfigError, load_config
from .linalg import BudgetExceeded
from .report import SCHEMA_VERSION, build_report, check_expected, failures, render_json, render_text
from .series import PrecisionError
from .spectral import PrecisionCeiling, SpectralError, WindowOverflow
from .strata import InvariantViolation

__all__ = ["main", "corpus_paths", "run_corpus"]

log = logging.getLogger("springer_lab")

EXIT_OK, EXIT_CONFIG, EXIT_LIMIT, EXIT_IDENTITY = 0, 2, 3, 4

SUBCOMMANDS = {
    "invariants": ("invariants",),
    "enumerate": ("enumerate",),
    "orbital": ("orbital",),
    "strata": ("strata",),
    "verify-fl": ("invariants", "orbital", "verify-fl"),
}

LIMIT_ERRORS = (PrecisionCeiling, PrecisionError, WindowOverflow, BudgetExceeded)


def _setup_logging():
    level = os.environ.get("SPRINGER_LAB_LOG", "warning").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def corpus_paths(directory=None):
    """Sorted corpus files: ``directory`` or the packaged golden suite."""
    if directory is not None:
        return sorted(Path(directory).glob("*.toml"))
    root = resources.files("springer_lab") / "corpus"
    return sorted(Path(str(p)) for p in root.iterdir() if p.name.endswith(".toml"))


def _run_one(cfg, sections, seed):
    """One configuration: (report, problems, exit code)."""
    try:
        doc = build_report(cfg, sections, seed)
    except LIMIT_ERRORS as exc:
        return {"name": cfg.name, "error": f"{type(exc).__name__}: {exc}"}, [str(exc)], EXIT_LIMIT
    except InvariantViolation as exc:
        return {"name": cfg.name, "error": f"InvariantViolation: {exc}"}, [str(exc)], EXIT_IDENTITY
    problems = failures(doc) + check_expected(cfg, doc)
    doc["problems"] = problems
    return doc, problems, EXIT_IDENTITY if problems else EXIT_OK


def run_corpus(paths, threads=1, seed=0, precision_ceiling=None, budget=None):
    """Run every corpus file; results are merged in file order."""
    cfgs = [load_config(p, precision_ceiling, budget) for p in paths]

    def job(cfg):
        return _run_one(cfg, cfg.sections, seed)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(job, cfgs))
    else:
        results = [job(c) for c in cfgs]
    code = max((r[2] for r in results), default=EXIT_OK)
    doc = {
        "schema": SCHEMA_VERSION,
        "corpus": [r[0] for r in results],
        "summary": {
            r[0]["name"]: "PASS" if r[2] == EXIT_OK else "FAIL" for r in results
        },
    }
    return doc, code


def build_parser():
    parser = argparse.ArgumentParser(
        prog="springer-lab",
        description="Affine Springer fibers, orbital integrals and the fundamental lemma by point counting.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=Path, help="write the JSON report here")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1, help="worker threads (default: cores)")
    common.add_argument("--precision-ceiling", type=int, help="override the configured precision ceiling")
    common.add_argument("--budget", type=int, help="override the enumeration budget")
    common.add_argument("--seed", type=int, default=0, help="seed for fiber-pair sampling")
    common.add_argument("--quiet", action="store_true", help="no text summary on stdout")
    for name in SUBCOMMANDS:
        p = sub.add_parser(name, parents=[common], help=f"run the {name} section(s) for one config")
        p.add_argument("--config", type=Path, required=True, help="experiment TOML file")
    p = sub.add_parser("corpus", parents=[common], help="run the golden corpus")
    p.add_argument("--corpus", type=Path, help="directory of TOML configs (default: packaged corpus)")
    return parser


def _write(doc, out):
    if out is not None:
        out.write_text(render_json(doc), encoding="utf-8")


def main(argv=None):
    _setup_logging()
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        if args.command == "corpus":
            paths = corpus_paths(args.corpus)
            if not paths:
                raise ConfigError(str(args.corpus), "no *.toml files")
            doc, code = run_corpus(paths, max(1, args.threads), args.seed, args.precision_ceiling, args.budget)
            if not args.quiet:
                for rep in doc["corpus"]:
                    if "error" in rep:
                        print(f"== {rep['name']} ==\nERROR {rep['error']}")
                    else:
                        print(render_text(rep), end="")
                print(f"corpus: {sum(v == 'PASS' for v in doc['summary'].values())}/{len(doc['summary'])} PASS"
                      f"  ({time.perf_counter() - start:.1f} s)")
        else:
            cfg = load_config(args.config, args.precision_ceiling, args.budget)
            sections = SUBCOMMANDS[args.command]
            if args.command in ("orbital", "verify-fl") and not cfg.hermitian:
                raise ConfigError("field.hermitian", f"'{args.command}' needs hermitian data")
            if args.command in ("strata", "verify-fl") and not cfg.partitions:
                raise ConfigError("partition", f"'{args.command}' needs at least one [[partition]]")
            doc, problems, code = _run_one(cfg, sections, args.seed)
            if not args.quiet and "error" not in doc:
                print(render_text(doc, time.perf_counter() - start), end="")
            for msg in problems:
                print(f"error: {msg}", file=sys.stderr)
            if code == EXIT_IDENTITY and "error" not in doc:
                # diagnostic dump of the full report
                print(render_json(doc), file=sys.stderr, end="")
        _write(doc, args.out)
        return code
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SpectralError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
