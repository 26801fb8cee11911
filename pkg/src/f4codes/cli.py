"""Command-line interface: f4codes <command> ..."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import catalog as cat
from . import minweight as mw
from .circulant import CodeSpecError, InvalidPairError, parse_spec_line, parse_spec_lines
from .code import (
    BudgetExceeded,
    TypeLabel,
    circulant_pair_code,
    classify_type,
    is_self_dual,
    predict_type_prop1,
)
from .gf4 import format_vectors
from .search import SearchConfig, SearchRecord, SearchSpaceTooLarge, run_search

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _load_codes(args) -> list[tuple[str, object]]:
    """(name, CirculantPair) from --file, --spec and --name, in that order."""
    out = []
    for path in args.file or []:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        for i, (name, p) in enumerate(parse_spec_lines(text.splitlines())):
            out.append((name or f"{Path(path).name}:{i + 1}", p))
    for i, line in enumerate(args.spec or []):
        name, p = parse_spec_line(line, i + 1)
        out.append((name or f"code{i + 1}", p))
    for name in args.name or []:
        try:
            out.append((name, cat.catalog_lookup(name).pair))
        except KeyError as e:
            raise UsageError(e.args[0]) from None
    if not out:
        raise UsageError("no code given: use --spec, --file or --name")
    return out


def _record(name, p) -> dict:
    return {"name": name, "n": p.n, "length": p.length, "self_dual": None, "type": None,
            "min_weight": None, "certificate": None, "counts": None}


def _emit(args, records: list[dict], lines: list[str]) -> None:
    if args.json:
        print(json.dumps({"codes": records} if records else {}, indent=2))
    else:
        print("\n".join(lines))


def cmd_build(args) -> int:
    recs, lines = [], []
    for name, p in _load_codes(args):
        c = circulant_pair_code(p)
        rec = _record(name, p)
        rec["spec"] = p.spec_line(name)
        rec["generators"] = [str(g) for g in c.generators]
        recs.append(rec)
        lines.append(f"# {p.spec_line(name)}")
        lines.append(format_vectors(c.generators))
    _emit(args, recs, lines)
    return EXIT_OK


def cmd_check(args) -> int:
    recs, lines, status = [], [], EXIT_OK
    for name, p in _load_codes(args):
        c = circulant_pair_code(p)
        rec = _record(name, p)
        sd = is_self_dual(c)
        rec["self_dual"] = sd
        if sd:
            t = classify_type(c)
            pred = predict_type_prop1(p)
            rec["type"] = str(t)
            rec["predicted_type"] = str(pred)
            ok = t == pred
        else:
            ok = False
        status = status if ok else EXIT_MISMATCH
        recs.append(rec)
        lines.append(f"{name} n={p.n} length={p.length} self_dual={sd} type={rec['type']} "
                     f"{'PASS' if ok else 'FAIL'}")
    _emit(args, recs, lines)
    return status


def _certificate(c, method: str, workers: int):
    if method == "enumerate":
        return mw.min_weight_enumerate(c, workers=workers)
    if method == "windowed":
        return mw.min_weight_windowed(c, workers=workers)
    return mw.min_weight(c, workers=workers)


def cmd_minweight(args) -> int:
    recs, lines, status = [], [], EXIT_OK
    for name, p in _load_codes(args):
        c = circulant_pair_code(p)
        rec = _record(name, p)
        if args.at_least is not None:
            ok, cert = mw.verify_no_word_below(c, args.at_least, workers=args.threads)
            status = status if ok else EXIT_MISMATCH
            verdict = f"no word below {args.at_least}: {ok}"
        else:
            cert = _certificate(c, args.method, args.threads)
            verdict = f"d={cert.claimed_d}"
        mw.check_certificate(c, cert)
        if cert.kind == "exact":
            rec["min_weight"] = cert.claimed_d
        rec["certificate"] = cert.to_dict()
        recs.append(rec)
        lines.append(f"{name} length={p.length} {verdict} method={cert.method} kind={cert.kind}")
        if cert.witness is not None:
            lines.append(f"  witness {cert.witness}")
        for ps in cert.passes:
            if "window" in ps:
                lines.append(f"  form={ps['form_index']} r={ps['r']} rank={ps['window_rank']} "
                             f"contribution={ps['contribution']} bound={ps['lower_bound']}")
    _emit(args, recs, lines)
    return status


def cmd_count(args) -> int:
    recs, lines = [], []
    top = max(args.weight)
    exhaustive = True
    for name, p in _load_codes(args):
        c = circulant_pair_code(p)
        rec = _record(name, p)
        reports = mw.count_words_up_to(c, top, workers=args.threads)
        rec["counts"] = {str(w): reports[w].count for w in args.weight}
        rec["exhaustive"] = all(reports[w].exhaustive for w in args.weight)
        exhaustive &= rec["exhaustive"]
        recs.append(rec)
        parts = " ".join(f"A_{w}={reports[w].count}" for w in args.weight)
        lines.append(f"{name} {parts}" + ("" if rec["exhaustive"] else " (partial)"))
    _emit(args, recs, lines)
    return EXIT_OK if exhaustive else EXIT_MISMATCH


def cmd_classify(args) -> int:
    recs, lines = [], []
    for name, p in _load_codes(args):
        c = circulant_pair_code(p)
        rec = _record(name, p)
        rec["self_dual"] = is_self_dual(c)
        rec["type"] = str(classify_type(c, method=args.method))
        rec["predicted_type"] = str(predict_type_prop1(p))
        recs.append(rec)
        lines.append(f"{name} type={rec['type']} predicted={rec['predicted_type']}")
    _emit(args, recs, lines)
    return EXIT_OK


def cmd_search(args) -> int:
    start = None
    if args.start:
        start = parse_spec_line(args.start, 1)[1]
    shard = (0, 1)
    if args.shard:
        try:
            i, k = (int(x) for x in args.shard.split("/"))
        except ValueError:
            raise UsageError("--shard expects INDEX/COUNT") from None
        shard = (i, k)
    cfg = SearchConfig(length=args.length, mode=args.mode, type_filter=args.type, seed=args.seed,
                       d_min=args.d_min, budget=args.budget, checkpoint_interval=args.checkpoint_interval,
                       workers=args.threads, shard=shard, reduce_equivalent=args.reduce, start=start)
    resume = None
    ckpt = Path(args.checkpoint) if args.checkpoint else None
    if ckpt is not None and args.resume and ckpt.exists():
        resume = SearchRecord.from_dict(json.loads(ckpt.read_text()))

    def on_checkpoint(rec: SearchRecord) -> None:
        print(rec.progress_line(), file=sys.stderr, flush=True)
        if ckpt is not None:
            tmp = ckpt.with_suffix(ckpt.suffix + ".tmp")
            tmp.write_text(rec.to_json())
            tmp.replace(ckpt)

    rec = run_search(cfg, single=args.single, resume=resume, on_checkpoint=on_checkpoint)
    if args.json:
        print(rec.to_json())
    else:
        print(rec.summary())
    return EXIT_OK


def _verify_entry(e: cat.CatalogEntry, workers: int) -> tuple[bool, dict, str]:
    c = e.code()
    rec = _record(e.name, e.pair)
    rec["self_dual"] = is_self_dual(c)
    t = classify_type(c)
    rec["type"] = str(t)
    ok = rec["self_dual"] and t == predict_type_prop1(e.pair)
    if e.claimed_type is not None:
        ok &= t == e.claimed_type
    if e.tier == "long":
        found, cert = mw.verify_no_word_below(c, e.claimed_d, workers=workers)
        ok &= found and cert.kind == "exact"
    else:
        cert = mw.min_weight(c, workers=workers)
    mw.check_certificate(c, cert)
    d = cert.claimed_d if cert.kind == "exact" else None
    ok &= d == e.claimed_d
    rec["min_weight"] = d
    rec["certificate"] = cert.to_dict()
    parts = [f"{e.name} n={e.pair.n} length={e.length} d={d} type={t}"]
    if e.claimed_counts:
        top = max(e.claimed_counts)
        reports = mw.count_words_up_to(c, top, workers=workers)
        rec["counts"] = {str(w): reports[w].count for w in e.claimed_counts}
        for w, want in sorted(e.claimed_counts.items()):
            ok &= reports[w].exhaustive and reports[w].count == want
            parts.append(f"A_{w}={reports[w].count}")
        q = cat.quantum_params(c, cert) if ok else None
        if q is not None:
            parts.append(str(q))
    parts.append("PASS" if ok else "FAIL")
    return ok, rec, " ".join(parts)


def cmd_catalog(args) -> int:
    if args.action == "list":
        for e in cat.entries():
            print(f"{e.spec_line()} d={e.claimed_d} tier={e.tier}")
        return EXIT_OK
    if args.name:
        try:
            chosen = [cat.catalog_lookup(n) for n in args.name]
        except KeyError as e:
            raise UsageError(e.args[0]) from None
    elif args.all:
        chosen = cat.entries(args.tier)
    else:
        raise UsageError("catalog verify needs --name or --all")
    recs, lines, status = [], [], EXIT_OK
    for e in chosen:
        ok, rec, line = _verify_entry(e, args.threads)
        status = status if ok else EXIT_MISMATCH
        recs.append(rec)
        lines.append(line)
        if not args.json:
            print(line, flush=True)
    if args.json:
        _emit(args, recs, lines)
    return status


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--threads", type=int, default=1, help="worker threads")

    codes = argparse.ArgumentParser(add_help=False)
    codes.add_argument("--spec", action="append", help="code-spec line 'n=.. A=.. B=..' (repeatable)")
    codes.add_argument("--file", action="append", help="file of code-spec lines, '-' for stdin")
    codes.add_argument("--name", action="append", help="catalog entry name (repeatable)")

    ap = argparse.ArgumentParser(prog="f4codes", description="Self-dual additive GF(4) codes from circulant pairs.")
    sub = ap.add_subparsers(dest="command", required=True)

    sub.add_parser("build", parents=[common, codes], help="dump generator rows").set_defaults(func=cmd_build)
    sub.add_parser("check", parents=[common, codes], help="self-duality and type").set_defaults(func=cmd_check)

    p = sub.add_parser("minweight", parents=[common, codes], help="minimum weight with certificate")
    p.add_argument("--method", choices=["auto", "enumerate", "windowed"], default="auto")
    p.add_argument("--at-least", type=int, help="only prove there is no word below this weight")
    p.set_defaults(func=cmd_minweight)

    p = sub.add_parser("count", parents=[common, codes], help="number of codewords of given weights")
    p.add_argument("--weight", "-w", type=int, action="append", required=True)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("classify", parents=[common, codes], help="Type I / Type II")
    p.add_argument("--method", choices=["auto", "parity", "enumerate"], default="auto")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("search", parents=[common], help="search circulant codes")
    p.add_argument("--length", type=int, required=True, help="code length (n for --single)")
    p.add_argument("--mode", choices=["exhaustive", "random"], default="exhaustive")
    p.add_argument("--type", choices=["any", "TypeI", "TypeII"], default="any")
    p.add_argument("--single", action="store_true", help="single symmetric circulant A + wI")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int)
    p.add_argument("--d-min", type=int, default=0)
    p.add_argument("--start", help="random mode: code-spec line to start from")
    p.add_argument("--shard", help="INDEX/COUNT")
    p.add_argument("--reduce", action="store_true", help="skip pairs equivalent under decimation and shift")
    p.add_argument("--checkpoint", help="checkpoint file")
    p.add_argument("--checkpoint-interval", type=int, default=10_000)
    p.add_argument("--resume", action="store_true", help="continue from --checkpoint")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("catalog", parents=[common], help="embedded reference codes")
    p.add_argument("action", choices=["verify", "list"])
    p.add_argument("--name", action="append")
    p.add_argument("--all", action="store_true")
    p.add_argument("--tier", choices=["fast", "full", "long"], default="fast")
    p.set_defaults(func=cmd_catalog)
    return ap


def cli_main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except CodeSpecError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (InvalidPairError, UsageError, SearchSpaceTooLarge) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as e:
        print(f"error: {e}; try --method windowed", file=sys.stderr)
        return EXIT_USAGE
    except mw.CertificateError as e:
        print(f"certificate check failed: {e}", file=sys.stderr)
        return EXIT_MISMATCH


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
