"""Command line interface: ``burau``, ``order``, ``index``, ``cascade``, ``invariant``, ``compare``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

from pipeline.cache import OrderCacheFile, load_record, save_record, write_scan_table
from pipeline.config import build_config, cache_disabled, parse_trace_point, resolve_state_dir
from pipeline.report import compare_reports
from pipeline.service import PipelineService, exit_code

from .. import __version__
from ..braid import BraidWord, exponent_sum, parse_braid
from ..burau import LaurentPoly, burau, det_laurent, symplectic, trace_at
from ..errors import EXIT_CONFIG, EXIT_NUMERICAL, EXIT_OK, RouteInvariantsError, exit_code_for
from ..modular import OrderCache, braid_image_order, relative_index
from ..ordering import compare

logger = logging.getLogger(__name__)

ORDER_CACHE_NAME = "orders.bin"
BURAU_SCHEMA = "route-invariants/burau/1"
INDEX_SCHEMA = "route-invariants/index/1"
COMPARE_SCHEMA = "route-invariants/compare/1"


def _format_warning(msg: str) -> str:
    return f"warning: {msg}"


def _emit(data: Dict[str, Any]) -> None:
    sys.stdout.write(json.dumps(data, sort_keys=True, indent=2, ensure_ascii=True) + "\n")
    sys.stdout.flush()


def _configure_logging(args: argparse.Namespace) -> None:
    level = logging.INFO
    if getattr(args, "quiet", False):
        level = logging.WARNING
    if getattr(args, "verbose", False):
        level = logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger("route_invariants").setLevel(level)
    logging.getLogger("pipeline").setLevel(level)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0, help="Seed for every random choice (default 0)")
    parser.add_argument("--quiet", action="store_true", help="Suppress informational output")
    parser.add_argument("--verbose", action="store_true", help="Enable debug output")
    parser.add_argument("--state-dir", type=Path, default=None, help="Override the cache directory")
    parser.add_argument("--no-cache", action="store_true", help="Do not read or write the order cache")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="route-invariants",
        description="Braid invariants of period-doubling routes to chaos",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    burau_p = sub.add_parser("burau", help="Burau matrix of a braid word")
    burau_p.add_argument("--strands", type=int, required=True)
    burau_p.add_argument("--braid", required=True, help='Signed generators, e.g. "-1 2"')
    burau_p.add_argument("--t", dest="points", action="append", default=[], help="Also report the trace at t")

    order_p = sub.add_parser("order", help="Compare two braids read from files")
    order_p.add_argument("--strands", type=int, required=True)
    order_p.add_argument("left", type=Path)
    order_p.add_argument("right", type=Path)

    index_p = sub.add_parser("index", help="Relative index of a braid's cyclic image mod N")
    index_p.add_argument("--braid", required=True)
    index_p.add_argument("--strands", type=int, required=True)
    index_p.add_argument("--mod", dest="modulus", type=int, action="append", required=True)

    cascade_p = sub.add_parser("cascade", help="Follow a Hénon period-doubling cascade")
    cascade_p.add_argument("--b", type=float, default=None)
    cascade_p.add_argument("--b-end", type=float, default=None)
    cascade_p.add_argument("--a-min", type=float, default=None)
    cascade_p.add_argument("--a-max", type=float, default=None)
    cascade_p.add_argument("--max-doublings", type=int, default=None)
    cascade_p.add_argument("--period", dest="initial_period", type=int, default=None)
    cascade_p.add_argument("--interpolation", choices=["isotopy", "linear"], default=None)
    cascade_p.add_argument("--steps", dest="interpolation_steps", type=int, default=None)
    cascade_p.add_argument("--config", type=Path, default=None, help="JSON configuration file")
    cascade_p.add_argument("--out", type=Path, required=True, help="Where to write the record JSON")
    cascade_p.add_argument("--csv", action="store_true", help="Also write the doubling scan as CSV")

    invariant_p = sub.add_parser("invariant", help="Run the full invariant pipeline")
    invariant_p.add_argument("--config", type=Path, default=None, help="JSON configuration file")
    invariant_p.add_argument("--b", type=float, default=None)
    invariant_p.add_argument("--b-end", type=float, default=None)
    invariant_p.add_argument("--a-min", type=float, default=None)
    invariant_p.add_argument("--a-max", type=float, default=None)
    invariant_p.add_argument("--max-doublings", type=int, default=None)
    invariant_p.add_argument("--depth", type=int, default=None)
    invariant_p.add_argument("--mod", dest="moduli", default=None, help="Comma separated moduli N")
    invariant_p.add_argument("--primes", default=None, help="Comma separated primes p")
    invariant_p.add_argument("--t", dest="trace_points", default=None, help="Comma separated trace points")
    invariant_p.add_argument("--element-cap", type=int, default=None)
    invariant_p.add_argument("--workers", type=int, default=None)
    invariant_p.add_argument("--record", dest="records", type=Path, action="append", default=[],
                             help="Use a stored cascade record instead of computing one (repeatable)")
    invariant_p.add_argument("--out", dest="output", type=Path, default=None, help="Report path (default stdout)")

    compare_p = sub.add_parser("compare", help="Compare two invariant reports")
    compare_p.add_argument("left", type=Path)
    compare_p.add_argument("right", type=Path)

    for p in (burau_p, order_p, index_p, cascade_p, invariant_p, compare_p):
        _add_common(p)
    return parser


def _read_word(path: Path, strands: int) -> BraidWord:
    return parse_braid(path.read_text(encoding="utf-8"), strands)


def _expected_determinant(word: BraidWord) -> LaurentPoly:
    """``(-t)^e`` for exponent sum ``e``."""
    e = exponent_sum(word)
    return LaurentPoly.monomial(-1 if e % 2 else 1, e)


def _cmd_burau(args: argparse.Namespace) -> int:
    word = parse_braid(args.braid, args.strands)
    matrix = burau(word)
    data: Dict[str, Any] = {
        "schema": BURAU_SCHEMA,
        "strands": word.strands,
        "braid": args.braid,
        "matrix": matrix.to_json(),
        "determinant": str(det_laurent(matrix)),
        "expected_determinant": str(_expected_determinant(word)),
        "symplectic": symplectic(word).to_json(),
    }
    traces = {}
    for label in args.points:
        value = trace_at(word, parse_trace_point(label))
        traces[label] = [value.real, value.imag]
    if traces:
        data["traces"] = traces
    _emit(data)
    return EXIT_OK


def _cmd_order(args: argparse.Namespace) -> int:
    result = compare(_read_word(args.left, args.strands), _read_word(args.right, args.strands))
    sys.stdout.write(result.value + "\n")
    return EXIT_OK


def _order_cache(args: argparse.Namespace) -> Optional[OrderCacheFile]:
    if cache_disabled(args.no_cache):
        return None
    return OrderCacheFile(resolve_state_dir(args.state_dir) / ORDER_CACHE_NAME)


def _cmd_index(args: argparse.Namespace) -> int:
    word = parse_braid(args.braid, args.strands)
    store = _order_cache(args)
    cache = store.load() if store else OrderCache()
    before = len(cache)
    results = {}
    for modulus in args.modulus:
        results[str(modulus)] = {
            "image_order": str(braid_image_order(word.strands, modulus, cache=cache)),
            "index": str(relative_index(word, modulus, cache=cache)),
        }
    if store and len(cache) != before:
        store.save(cache)
    _emit({"schema": INDEX_SCHEMA, "strands": word.strands, "braid": args.braid, "moduli": results})
    return EXIT_OK


_CASCADE_FLAGS = ("b", "b_end", "a_min", "a_max", "max_doublings", "initial_period", "interpolation",
                  "interpolation_steps", "seed")


def _cmd_cascade(args: argparse.Namespace) -> int:
    cfg = build_config(args.config, {k: getattr(args, k) for k in _CASCADE_FLAGS})
    service = PipelineService(cfg)
    record = service.build_record()
    if record is None:
        for entry in service.ledger:
            print(f"error: {entry.stage}: {entry.message}", file=sys.stderr)
        return EXIT_NUMERICAL
    save_record(record, args.out)
    if args.csv:
        write_scan_table(record, args.out.with_suffix(".csv"))
    for d in record.doublings:
        logger.info("period %d doubles at a=%.10f", d.orbit.period, d.params.a)
    if record.failure:
        print(_format_warning(record.failure), file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


_INVARIANT_FLAGS = ("b", "b_end", "a_min", "a_max", "max_doublings", "depth", "moduli", "primes",
                    "trace_points", "element_cap", "workers", "output", "seed")


def _cmd_invariant(args: argparse.Namespace) -> int:
    cfg = build_config(args.config, {k: getattr(args, k) for k in _INVARIANT_FLAGS})
    store = _order_cache(args)
    cache = store.load() if store else OrderCache()
    before = len(cache)
    records = [load_record(p) for p in args.records] or None
    report = PipelineService(cfg, order_cache=cache).run(records)
    if store and len(cache) != before:
        store.save(cache)

    text = report.to_json()
    if cfg.output is not None:
        cfg.output.parent.mkdir(parents=True, exist_ok=True)
        cfg.output.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if not args.quiet:
        for entry in report.errors:
            print(_format_warning(f"{entry.stage}: {entry.message}"), file=sys.stderr)
    return exit_code(report)


def _load_report(path: Path) -> Dict[str, Any]:
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise RouteInvariantsError(f"{path} is not a JSON report: {exc}") from exc


def _cmd_compare(args: argparse.Namespace) -> int:
    diff = compare_reports(_load_report(args.left), _load_report(args.right))
    _emit({"schema": COMPARE_SCHEMA, **diff.to_dict()})
    return EXIT_OK


COMMANDS: Dict[str, Callable[[argparse.Namespace], int]] = {
    "burau": _cmd_burau,
    "order": _cmd_order,
    "index": _cmd_index,
    "cascade": _cmd_cascade,
    "invariant": _cmd_invariant,
    "compare": _cmd_compare,
}


def run(args: argparse.Namespace) -> int:
    _configure_logging(args)
    try:
        return COMMANDS[args.command](args)
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.filename}", file=sys.stderr)
        return EXIT_CONFIG
    except RouteInvariantsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exit_code_for(exc)


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    return build_parser().parse_args(argv)


def main(argv: Optional[List[str]] = None) -> int:
    return run(parse_args(argv))


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
