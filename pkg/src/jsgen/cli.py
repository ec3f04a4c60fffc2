"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 data error, 3 internal invariant
violation.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import platform
import sys
from pathlib import Path

from . import __version__
from .config import AUGMENT_MODES, RunConfig, load_config

log = logging.getLogger("jsgen")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class InvariantViolation(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


# -- manifests ---------------------------------------------------------------


def sha256_of(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def versions() -> dict:
    import numpy
    import torch

    return {"jsgen": __version__, "python": platform.python_version(), "torch": torch.__version__,
            "numpy": numpy.__version__}


def write_manifest(path, command: str, config: dict, inputs: list) -> None:
    manifest = {
        "command": command,
        "config": config,
        "seed": config.get("seed"),
        "inputs": {str(p): sha256_of(p) for p in inputs if p is not None and os.path.exists(p)},
        "versions": versions(),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, ensure_ascii=False, indent=2, sort_keys=True)
        fh.write("\n")


def _manifest_path(out) -> Path:
    out = Path(out)
    return out / "manifest.json" if out.is_dir() else out.with_name(out.name + ".manifest.json")


# -- helpers -----------------------------------------------------------------


def _grammar(path):
    from .grammar import default_grammar_text, load_grammar

    text = Path(path).read_text(encoding="utf-8") if path else default_grammar_text()
    return load_grammar(path), text


def _load(path):
    from .prep.corpus import load_corpus

    if path is None:
        raise UsageError("a corpus path is required")
    return load_corpus(path)


def _single_thread():
    import torch

    torch.set_num_threads(1)


# -- subcommands -------------------------------------------------------------


def cmd_preprocess(args) -> int:
    from .jsfront import JsSyntaxError
    from .prep.corpus import preprocess, save_corpus

    examples = _load(args.input)
    kept, dropped, warnings = [], [], []
    for i, ex in enumerate(examples, 1):
        try:
            p, w = preprocess(ex)
        except JsSyntaxError as e:
            dropped.append({"line": i, "error": str(e)})
            continue
        kept.append(p)
        warnings.extend({"line": i, "warning": msg} for msg in w)
    save_corpus(args.output, kept)
    report = {"input": len(examples), "kept": len(kept), "dropped": dropped, "warnings": warnings}
    if args.report:
        Path(args.report).write_text(json.dumps(report, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")
    for d in dropped:
        print(f"dropped line {d['line']}: {d['error']}", file=sys.stderr)
    print(f"kept {len(kept)} of {len(examples)} records", file=sys.stderr)
    write_manifest(_manifest_path(args.output), "preprocess", {}, [args.input])
    return EXIT_OK


def cmd_synth(args) -> int:
    from .augment import save_table
    from .prep.corpus import CATEGORIES, save_corpus
    from .synth import SyntheticSpec, generate

    counts = {c: args.per_category for c in CATEGORIES}
    spec = SyntheticSpec(counts=counts, table_size=args.table_size, heldout=args.heldout,
                         train_names=args.train_names, seed=args.seed)
    try:
        corpus = generate(spec)
    except ValueError as e:
        raise DataError(str(e)) from e
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    save_corpus(out / "train.jsonl", corpus.train)
    save_corpus(out / "test.jsonl", corpus.test)
    save_table(out / "table.jsonl", corpus.table)
    (out / "heldout.json").write_text(json.dumps(corpus.heldout, indent=0) + "\n", encoding="utf-8")
    write_manifest(out / "manifest.json", "synth", {**vars(spec), "counts": counts}, [])
    print(f"wrote {len(corpus.train)} train, {len(corpus.test)} test, {len(corpus.table)} table entries to {out}")
    return EXIT_OK


def cmd_augment(args) -> int:
    from .augment import build_cg_task, build_vp_task, load_table
    from .prep.corpus import save_corpus

    entries = load_table(args.table)
    if args.task == "cg":
        examples = build_cg_task(entries, prefix=args.prefix, rotate_verbs=args.rotate_verbs, seed=args.seed)
    else:
        examples = build_vp_task(entries)
    save_corpus(args.out, examples)
    write_manifest(_manifest_path(args.out), f"augment build --task {args.task}",
                   {"prefix": args.prefix, "rotate_verbs": args.rotate_verbs, "seed": args.seed}, [args.table])
    print(f"wrote {len(examples)} {args.task} examples to {args.out}", file=sys.stderr)
    return EXIT_OK


def _run_config(args) -> RunConfig:
    from .config import field_names

    overrides = {k: getattr(args, k, None) for k in field_names()}
    try:
        return load_config(args.config, overrides)
    except (ValueError, TypeError) as e:
        raise UsageError(f"bad configuration: {e}") from e


def cmd_train(args) -> int:
    import torch

    from .augment import build_cg_task, load_table
    from .experiments import fit, preprocess_all, split_validation
    from .neural import save_checkpoint

    _single_thread()
    cfg = _run_config(args)
    g, grammar_text = _grammar(cfg.grammar)
    main, _ = preprocess_all(_load(cfg.train))
    if cfg.val:
        val, _ = preprocess_all(_load(cfg.val))
    else:
        main, val = split_validation(main, cfg.val_fraction, cfg.seed)
    aux = []
    if cfg.augment != "off":
        if not cfg.table:
            raise UsageError(f"--augment {cfg.augment} needs --table")
        aux = build_cg_task(load_table(cfg.table))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    torch.manual_seed(cfg.seed)
    model, curve = fit(main, val, aux, cfg.augment, cfg.model_config(), cfg.train_config(), g,
                       pretrain_epochs=cfg.pretrain_epochs, curve_path=out / "loss_curve.csv")
    save_checkpoint(out / "model.pt", model, grammar_text, {"run_config": cfg.to_json()})
    write_manifest(out / "manifest.json", "train", cfg.to_json(), [cfg.train, cfg.val, cfg.table, cfg.grammar])
    print(f"trained {len(curve)} epochs; checkpoint at {out / 'model.pt'}", file=sys.stderr)
    return EXIT_OK


def _checkpoint(args):
    from .neural import load_checkpoint

    if not args.checkpoint or not os.path.exists(args.checkpoint):
        raise DataError(f"missing checkpoint {args.checkpoint!r}")
    grammar_text = Path(args.grammar).read_text(encoding="utf-8") if args.grammar else None
    model, _ = load_checkpoint(args.checkpoint, grammar_text)
    return model


def cmd_generate(args) -> int:
    from .neural import beam_decode
    from .prep.text import tokenize_description

    _single_thread()
    model = _checkpoint(args)
    text = args.description if args.description is not None else sys.stdin.read()
    status = EXIT_OK
    for line in [text] if args.description is not None else text.splitlines():
        tokens = tokenize_description(line)
        if not tokens:
            continue
        candidates = beam_decode(model, tokens, args.beam)
        if not candidates:
            print(f"generation failed for {line!r}", file=sys.stderr)
            status = EXIT_DATA
        for c in candidates:
            print(f"{c.score:.4f}\t{c.code}")
    return status


def cmd_eval(args) -> int:
    from .experiments import decode_all
    from .metrics import evaluate
    from .prep.corpus import read_jsonl

    test = _load(args.test)
    if args.predictions:
        records = read_jsonl(args.predictions)
        if len(records) != len(test):
            raise DataError(f"{len(records)} predictions for {len(test)} test records")
        preds = [r["candidates"] if isinstance(r, dict) else list(r) for r in records]
        config = {"predictions": args.predictions, "beam": args.beam}
    else:
        _single_thread()
        model = _checkpoint(args)
        preds = decode_all(model, test, args.beam)
        config = {"checkpoint": args.checkpoint, "beam": args.beam}
    report = evaluate(preds, [ex.code for ex in test], [ex.category for ex in test], k=args.beam)
    print(report.table())
    if args.out:
        Path(args.out).write_text(report.dumps() + "\n", encoding="utf-8")
        write_manifest(_manifest_path(args.out), "eval", config, [args.test, args.checkpoint, args.predictions])
    return EXIT_OK


def roundtrip_code(code: str, g, subtokenize: bool = True) -> str:
    """parse, abstract, oracle actions, replay, concrete, print."""
    from .jsfront import abstract_to_code, parse_js, to_abstract
    from .transit import oracle_actions, replay

    tree = to_abstract(parse_js(code), g)
    return abstract_to_code(replay(oracle_actions(tree, g, subtokenize), g, subtokenize), g)


def cmd_roundtrip(args) -> int:
    from .jsfront import JsSyntaxError, UnsupportedNode, canonicalize

    g, _ = _grammar(args.grammar)
    examples = _load(args.corpus)
    data_fail = invariant_fail = 0
    for i, ex in enumerate(examples, 1):
        try:
            canon = canonicalize(ex.code)
            back = roundtrip_code(canon, g, not args.no_subtokenize)
        except (JsSyntaxError, UnsupportedNode) as e:
            data_fail += 1
            print(f"FAIL\t{i}\t{ex.code}\t{e}")
            continue
        except Exception as e:  # any other failure breaks a module contract
            invariant_fail += 1
            print(f"FAIL\t{i}\t{ex.code}\t{type(e).__name__}: {e}")
            continue
        if back != canon:
            invariant_fail += 1
            print(f"FAIL\t{i}\t{ex.code}\tround trip gave {back}")
        else:
            print(f"PASS\t{i}\t{canon}")
    passed = len(examples) - data_fail - invariant_fail
    print(f"{passed}/{len(examples)} pass", file=sys.stderr)
    if invariant_fail:
        return EXIT_INTERNAL
    return EXIT_DATA if data_fail else EXIT_OK


# -- argument parsing ----------------------------------------------------------


def _add_run_flags(p):
    p.add_argument("--config", help="JSON file with RunConfig fields; flags override it")
    p.add_argument("--grammar")
    p.add_argument("--train")
    p.add_argument("--val")
    p.add_argument("--table")
    p.add_argument("--augment", choices=AUGMENT_MODES)
    p.add_argument("--pretrain-epochs", dest="pretrain_epochs", type=int)
    p.add_argument("--no-subtokenize", dest="subtokenize", action="store_const", const=False)
    p.add_argument("--hidden", type=int)
    p.add_argument("--embed", type=int)
    p.add_argument("--batch-size", dest="batch_size", type=int)
    p.add_argument("--epochs", type=int)
    p.add_argument("--lr", type=float)
    p.add_argument("--clip", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--val-fraction", dest="val_fraction", type=float)
    p.add_argument("--dtype", choices=("float32", "float64"))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="jsgen", description="Natural-language to JavaScript expression generation.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("preprocess", help="canonicalize, replace literals, simplify members")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--report", help="write a JSON report of dropped records and warnings")
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("synth", help="write a synthetic corpus and semantic table")
    p.add_argument("--out", required=True)
    p.add_argument("--per-category", dest="per_category", type=int, default=75)
    p.add_argument("--table-size", dest="table_size", type=int, default=500)
    p.add_argument("--heldout", type=int, default=50)
    p.add_argument("--train-names", dest="train_names", type=int, default=150)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("augment", help="auxiliary-task data from a semantic table")
    asub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    b = asub.add_parser("build")
    b.add_argument("--table", required=True)
    b.add_argument("--task", choices=("cg", "vp"), required=True)
    b.add_argument("--out", required=True)
    b.add_argument("--prefix", default="展示")
    b.add_argument("--rotate-verbs", dest="rotate_verbs", action="store_true")
    b.add_argument("--seed", type=int, default=0)
    b.set_defaults(func=cmd_augment)

    p = sub.add_parser("train", help="train a model")
    _add_run_flags(p)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("generate", help="decode descriptions (argument or stdin lines)")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--grammar")
    p.add_argument("--beam", type=int, default=5)
    p.add_argument("description", nargs="?")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("eval", help="score a checkpoint or a predictions file on a test corpus")
    p.add_argument("--test", required=True)
    p.add_argument("--checkpoint")
    p.add_argument("--predictions", help="JSONL with a 'candidates' list per test record")
    p.add_argument("--grammar")
    p.add_argument("--beam", type=int, default=5)
    p.add_argument("--out", help="write the JSON report here")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("roundtrip", help="check the code-to-actions-to-code fixed point")
    p.add_argument("corpus")
    p.add_argument("--grammar")
    p.add_argument("--no-subtokenize", dest="no_subtokenize", action="store_true")
    p.set_defaults(func=cmd_roundtrip)
    return parser


def main(argv=None) -> int:
    from .grammar import ASDLSyntaxError, GrammarError
    from .jsfront import JsSyntaxError
    from .neural import CheckpointError, TrainingDiverged
    from .prep.corpus import CorpusError
    from .prep.vocab import VocabularyMismatch
    from .transit import IllegalAction, IncompleteDerivation

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f"jsgen: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.command == "eval" and not args.predictions and not args.checkpoint:
        print("jsgen: error: eval needs --checkpoint or --predictions", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as e:
        print(f"jsgen: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, CorpusError, JsSyntaxError, CheckpointError, VocabularyMismatch, ASDLSyntaxError,
            GrammarError, OSError) as e:
        print(f"jsgen: data error: {e}", file=sys.stderr)
        return EXIT_DATA
    except (InvariantViolation, IllegalAction, IncompleteDerivation, TrainingDiverged) as e:
        print(f"jsgen: internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
