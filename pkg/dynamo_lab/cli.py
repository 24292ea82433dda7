#!/usr/bin/env python3
"""
dynamo-lab command line interface
그래프 생성, 시뮬레이션, 인증, 최소 집합 탐색, 구성, bound 계산, corpus 검증
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from pydantic import ValidationError

from .bounds import GraphFlags, all_bounds
from .certify import Property, certify
from .config import get_settings
from .construct import dense_small_dynamo, dynamo_by_labeling, dynamo_twoway_r1, immortal_r2, stable_by_partition
from .corpus import default_corpus_spec, run_corpus, write_report
from .dynamics import Configuration, ThresholdModel, diagnose, run
from .errors import DynamoLabError, UsageError
from .generators import GENERATORS, generate, generator_params
from .graph import Graph, dump_graph, read_graph, write_graph
from .schemas import CorpusSpec
from .search import all_min_sets, all_sets_model, min_set

logger = logging.getLogger("dynamo_lab")

CONSTRUCTIONS = ("labeling", "twoway-r1", "dense", "partition", "immortal-r2")


def _emit(payload: Any) -> None:
    if hasattr(payload, "model_dump_json"):
        print(payload.model_dump_json(exclude_unset=True))
    else:
        print(json.dumps(payload))


def _parse_set(text: Optional[str]) -> List[int]:
    if not text:
        raise UsageError("--set is required, e.g. --set 0,1,2")
    try:
        return sorted({int(part) for part in text.split(",") if part.strip()})
    except ValueError:
        raise UsageError(f"--set expects comma separated node ids, got {text!r}") from None


def _model(args: argparse.Namespace) -> ThresholdModel:
    if not args.model:
        raise UsageError("--model is required")
    return ThresholdModel.parse(args.model, r=args.r, alpha=args.alpha)


def _graph(args: argparse.Namespace) -> Graph:
    if not args.graph:
        raise UsageError("a graph file is required")
    return read_graph(args.graph)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_generate(args: argparse.Namespace) -> int:
    accepted = generator_params(args.family)
    params: Dict[str, Any] = {name: getattr(args, name) for name in accepted if getattr(args, name, None) is not None}
    g = generate(args.family, **params)
    comment = f"{args.family} " + " ".join(f"{k}={v}" for k, v in params.items())
    if args.output:
        write_graph(g, args.output, comments=[comment.strip()])
        logger.info(f"✅ wrote {args.family} graph (n={g.n}, m={g.m}) to {args.output}")
        _emit({"generator": args.family, "params": params, "n": g.n, "m": g.m, "path": str(args.output)})
    else:
        sys.stdout.write(dump_graph(g, comments=[comment.strip()]))
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    g = _graph(args)
    m = _model(args)
    start = g.check_nodes(_parse_set(args.set)) if args.set else frozenset()
    trace = run(g, m, Configuration.from_nodes(start), limit=args.limit)
    records = trace.to_records()
    if args.diagnostics:
        diag = diagnose(g, trace)
        for t, record in enumerate(records[:-1]):
            record["phi_boundary"] = diag.phi_boundary[t]
            if t >= 1:
                record["core"] = sorted(diag.cores[t - 1])
                record["phi_core"] = diag.phi_core[t - 1]
    for record in records:
        _emit(record)
    return 0


def cmd_certify(args: argparse.Namespace) -> int:
    g = _graph(args)
    certificate = certify(g, _model(args), _parse_set(args.set), Property(args.property), limit=args.limit)
    _emit(certificate.to_model(include_trace=args.trace))
    return 0


def cmd_search_min(args: argparse.Namespace) -> int:
    g = _graph(args)
    m = _model(args)
    prop = Property(args.property)
    if args.size is not None:
        sets = all_min_sets(g, m, prop, args.size, cap=args.cap, limit=args.limit)
        _emit(all_sets_model(m, prop, args.size, sets))
        return 0
    result = min_set(g, m, prop, cap=args.cap, max_size=args.max_size, workers=args.workers, limit=args.limit)
    _emit(result.to_model())
    return 0


def cmd_construct(args: argparse.Namespace) -> int:
    g = _graph(args)
    if args.method == "labeling":
        report = dynamo_by_labeling(g, _model(args), seed=args.seed, samples=args.samples)
    elif args.method == "twoway-r1":
        report = dynamo_twoway_r1(g)
    elif args.method == "dense":
        if args.r is None:
            raise UsageError("dense construction needs --r")
        report = dense_small_dynamo(g, args.r, seed=args.seed)
    elif args.method == "partition":
        if args.alpha is None:
            raise UsageError("partition construction needs --alpha")
        report = stable_by_partition(g, args.alpha)
    else:
        report = immortal_r2(g)
    _emit(report.to_model())
    return 0 if report.certified else 1


def cmd_bounds(args: argparse.Namespace) -> int:
    m = _model(args)
    if args.graph:
        flags = GraphFlags.of(read_graph(args.graph))
    elif args.n is not None and args.delta is not None:
        flags = GraphFlags(n=args.n, delta=args.delta, bipartite=args.bipartite, tree=args.tree)
    else:
        raise UsageError("bounds needs a graph file or both --n and --delta")
    _emit(all_bounds(m, flags).to_model())
    return 0


def cmd_corpus_verify(args: argparse.Namespace) -> int:
    if args.spec:
        try:
            spec = CorpusSpec.model_validate_json(Path(args.spec).read_text(encoding="utf-8"))
        except ValidationError as e:
            raise UsageError(f"invalid corpus spec {args.spec}: {e.error_count()} errors") from None
        except UnicodeDecodeError:
            raise UsageError(f"corpus spec {args.spec} is not UTF-8 text") from None
        except OSError as e:
            raise UsageError(f"cannot read corpus spec {args.spec}: {e.strerror or e}") from None
    else:
        spec = default_corpus_spec(args.seed)
    if args.checks:
        spec = spec.model_copy(update={"checks": [c.strip() for c in args.checks.split(",") if c.strip()]})
    results, ctx = run_corpus(spec, seed=args.seed, workers=args.workers, progress=not args.no_progress)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as stream:
            write_report(results, ctx, stream)
    else:
        write_report(results, ctx, sys.stdout)
    failed = [r.id for r in results if not r.passed]
    if failed:
        logger.error(f"❌ {len(failed)} checks failed: {', '.join(failed)}")
        return 1
    logger.info(f"✅ all {len(results)} checks passed")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_model_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--model", help="r | twoway-r | alpha | twoway-alpha (or compact form, e.g. twoway-r:2)")
    parser.add_argument("--r", type=int, help="integer threshold for r models")
    parser.add_argument("--alpha", help="rational threshold P/Q for alpha models")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dynamo-lab", description="Bootstrap percolation dynamos, stable and immortal sets")
    parser.add_argument("--log-level", default=None, help="logging level (기본값: DYNAMO_LAB_LOG_LEVEL 또는 INFO)")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a named graph as an edge list")
    p.add_argument("family", choices=sorted(GENERATORS))
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--alpha")
    p.add_argument("--p", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("-o", "--output", help="output path (default: stdout)")
    p.set_defaults(handler=cmd_generate)

    p = sub.add_parser("simulate", help="run the process and print the trace as JSON lines")
    p.add_argument("graph")
    _add_model_flags(p)
    p.add_argument("--set", help="initially black nodes, comma separated")
    p.add_argument("--limit", type=int, help="round budget (default 4n + 16)")
    p.add_argument("--diagnostics", action="store_true", help="add core and potential values per round")
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("certify", help="decide a set property")
    p.add_argument("graph")
    _add_model_flags(p)
    p.add_argument("--set", required=True)
    p.add_argument("--property", choices=[prop.value for prop in Property], default=Property.DYNAMO.value)
    p.add_argument("--limit", type=int)
    p.add_argument("--trace", action="store_true", help="include the full trace")
    p.set_defaults(handler=cmd_certify)

    p = sub.add_parser("search-min", help="exact minimum set by exhaustive search")
    p.add_argument("graph")
    _add_model_flags(p)
    p.add_argument("--property", choices=[prop.value for prop in Property], default=Property.DYNAMO.value)
    p.add_argument("--cap", type=int, help="largest n allowed for exhaustive search")
    p.add_argument("--max-size", type=int, help="stop after this set size")
    p.add_argument("--size", type=int, help="list every certified set of exactly this size")
    p.add_argument("--workers", type=int)
    p.add_argument("--limit", type=int)
    p.set_defaults(handler=cmd_search_min)

    p = sub.add_parser("construct", help="build a certified set")
    p.add_argument("method", choices=CONSTRUCTIONS)
    p.add_argument("graph")
    _add_model_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=100)
    p.set_defaults(handler=cmd_construct)

    p = sub.add_parser("bounds", help="closed-form bounds for a model")
    p.add_argument("graph", nargs="?")
    _add_model_flags(p)
    p.add_argument("--n", type=int)
    p.add_argument("--delta", type=int)
    p.add_argument("--bipartite", action=argparse.BooleanOptionalAction, default=None)
    p.add_argument("--tree", action="store_true")
    p.set_defaults(handler=cmd_bounds)

    p = sub.add_parser("corpus-verify", help="run the verification checks over a graph corpus")
    p.add_argument("--spec", help="CorpusSpec JSON file (default: built-in corpus)")
    p.add_argument("--seed", type=int)
    p.add_argument("--checks", help="comma separated check ids")
    p.add_argument("--workers", type=int)
    p.add_argument("-o", "--output")
    p.add_argument("--no-progress", action="store_true")
    p.set_defaults(handler=cmd_corpus_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    level = "DEBUG" if args.verbose else (args.log_level or get_settings().log_level)
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )

    try:
        return args.handler(args)
    except DynamoLabError as e:
        logger.error(f"{args.command} failed: {e}")
        _emit({"error": type(e).__name__, "message": str(e)})
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
