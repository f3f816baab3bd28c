"""Command line interface: ``partition-rules {train,audit,classify,evaluate,inspect}``.

Exit status: 0 on success (for ``audit``: no rejections), 1 on operational
errors, 2 when ``audit`` finds at least one rejected partition.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import modelfile
from .classifier import Gate, audit_report, classify, compare_modes, count_model, evaluate
from .corpus import NO_TOPIC_LABEL, CorpusError, LabeledDocument, load_reuters, load_simple, parse_simple
from .estimator import fit_model
from .report import render_audit, render_eval, render_model
from .textkit import normalize
from .trainer import DEFAULT_BUDGET, SearchConfig

log = logging.getLogger("partition_rules")

EXIT_OK, EXIT_ERROR, EXIT_REJECT = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for audit rejections
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _load_corpus(args) -> list[LabeledDocument]:
    if args.format == "reuters":
        docs, summary = load_reuters(
            args.corpus,
            modapte_strict=not args.no_modapte_strict,
            zero_topic=args.zero_topic,
            include_dateline=args.include_dateline,
        )
        log.info("corpus summary: %s", json.dumps(summary.as_dict(), sort_keys=True))
        return docs
    return load_simple(args.corpus)


def _pairs(docs, split: str) -> list[tuple[str, str]]:
    return [(d.label, normalize(d.body)) for d in docs if d.split == split]


def _add_corpus_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--corpus", required=required, help="corpus file (simple) or Reuters-21578 directory")
    p.add_argument("--format", choices=("simple", "reuters"), default="simple")
    p.add_argument("--zero-topic", choices=("drop", "negative"), default="drop",
                   help="Reuters: drop topic-less documents or keep them as negatives")
    p.add_argument("--no-modapte-strict", action="store_true",
                   help="Reuters: do not require TOPICS=\"YES\"")
    p.add_argument("--include-dateline", action="store_true", help="Reuters: search DATELINE text too")


def cmd_train(args) -> int:
    docs = _load_corpus(args)
    train = _pairs(docs, "train")
    if not train:
        raise UsageError("corpus has no training documents")
    labels = [l for l, _ in train]
    texts = [d for _, d in train]
    present = sorted(set(labels) - {NO_TOPIC_LABEL})
    if args.classes:
        classes = [c.strip() for c in args.classes.split(",") if c.strip()]
        unknown = [c for c in classes if c not in present]
        if unknown:
            raise UsageError(f"unknown class(es) {unknown}; training labels are {present}")
    else:
        classes = present
    word_sets = None
    if args.word_sets:
        word_sets = json.loads(Path(args.word_sets).read_text(encoding="utf-8"))
        stray = sorted(set(word_sets) - set(classes))
        if stray:
            raise UsageError(f"--word-sets names classes not being trained: {stray}")
    config = SearchConfig(args.max_patterns, args.max_pattern_len, args.budget, args.seed)
    model, results = fit_model(labels, texts, classes, config, word_sets)
    modelfile.save(model, args.out)

    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            for label, res in results.items():
                if res is None:
                    continue
                for entry in res.trace:
                    fh.write(json.dumps({"class": label, **entry.as_dict()}) + "\n")

    for cm, prov in zip(model.models, model.class_provenance):
        f = prov["fitness"]
        print(
            f"{cm.label}\twords={list(cm.word_set.patterns)!r}\tt={f['t']} f={f['f']} d={f['d']}"
            f"\tP={f['P']:.4f} R={f['R']:.4f} F={f['F']:.4f}"
        )
    print(f"model written to {args.out}")
    return EXIT_OK


def cmd_audit(args) -> int:
    model = modelfile.load(args.model)
    docs = _load_corpus(args)
    pairs = _pairs(docs, args.split)
    test_counts = count_model(model, pairs)
    rows = audit_report(model, None, test_counts, args.alpha, "table" if args.t_table else "exact")
    if args.json:
        for r in rows:
            t = r.result
            print(json.dumps({
                "class": r.label,
                "partition": r.bits,
                "train": None if r.train is None else [r.train.in_count, r.train.out_count],
                "test": None if r.test is None else [r.test.in_count, r.test.out_count],
                "p": t and t.p, "p_prime": t and t.p_prime, "dof": t and t.dof,
                "t_crit": t and t.t_crit, "t": t and t.t,
                "reject": t.reject if t else None, "note": r.note,
            }))
    else:
        sys.stdout.write(render_audit(rows))
    return EXIT_REJECT if any(r.reject for r in rows) else EXIT_OK


def _read_inputs(args):
    stream = sys.stdin if args.input == "-" else open(args.input, encoding="utf-8")
    with stream:
        if args.input_format == "simple":
            for d in parse_simple(stream, args.input):
                yield d.id, d.body
        else:
            for i, line in enumerate(stream, 1):
                line = line.rstrip("\n")
                if line.strip():
                    yield str(i), line


def cmd_classify(args) -> int:
    model = modelfile.load(args.model)
    gate = Gate(args.mode, args.q)
    for doc_id, body in _read_inputs(args):
        dec = classify(model, normalize(body), gate)
        print(json.dumps({"id": doc_id, **dec.as_dict()}))
    return EXIT_OK


def cmd_evaluate(args) -> int:
    model = modelfile.load(args.model)
    docs = _load_corpus(args)
    splits = ("train", "test") if args.split == "both" else (args.split,)
    modes = ("p", "pl") if args.mode == "both" else (args.mode,)
    data = {s: _pairs(docs, s) for s in splits}
    reports = []
    agreement = {}
    for mode in modes:
        for s in splits:
            reports.append((s, evaluate(model, data[s], Gate(mode, args.q))))
    if len(modes) == 2:
        for s in splits:
            cmp = compare_modes(model, data[s], args.q)
            agreement[s] = (cmp["same_assigned_set"], len(cmp["label_disagreements"]))
    if args.json:
        for tag, rep in reports:
            for c in rep.classes:
                print(json.dumps({
                    "split": tag, "mode": rep.gate.mode, "q": rep.gate.q, "class": c.label,
                    "precision": c.precision, "recall": c.recall, "assigned": c.assigned,
                    "correct": c.correct, "in_class": c.in_class, "abstained": c.abstained,
                }))
    else:
        sys.stdout.write(render_eval(reports))
        for s, (same, n_dis) in agreement.items():
            print(f"{s}: p and pl assign the same documents: {'yes' if same else 'no'}; "
                  f"label disagreements: {n_dis}")
    return EXIT_OK


def cmd_inspect(args) -> int:
    sys.stdout.write(render_model(modelfile.load(args.model)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="partition-rules", description="Train, audit and apply keyword-set rule classifiers.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="search word sets and write a model file")
    _add_corpus_args(p)
    p.add_argument("--classes", help="comma-separated class labels (default: all)")
    p.add_argument("--max-patterns", type=int, default=2)
    p.add_argument("--max-pattern-len", type=int, default=15)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="iterations per class")
    p.add_argument("--seed", type=int, default=0, help="seed of the first class; class i uses seed+i")
    p.add_argument("--word-sets", help="JSON {label: [patterns]} imposed instead of searched")
    p.add_argument("--trace", help="write the search trace as JSON lines")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("audit", help="two-sided test of training vs testing precision")
    p.add_argument("model")
    _add_corpus_args(p)
    p.add_argument("--split", choices=("test", "train"), default="test")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--t-table", action="store_true",
                   help="printed t-table critical values (normal quantile above 120 dof)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("classify", help="gated decisions as JSON lines")
    p.add_argument("model")
    p.add_argument("--input", default="-", help="input file, '-' for stdin")
    p.add_argument("--input-format", choices=("lines", "simple"), default="lines")
    p.add_argument("--mode", choices=("p", "pl"), default="p")
    p.add_argument("--q", type=float, default=0.0)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("evaluate", help="precision and recall under a gate")
    p.add_argument("model")
    _add_corpus_args(p)
    p.add_argument("--split", choices=("train", "test", "both"), default="both")
    p.add_argument("--mode", choices=("p", "pl", "both"), default="both")
    p.add_argument("--q", type=float, default=0.0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("inspect", help="print word sets and partition counts")
    p.add_argument("model")
    p.set_defaults(func=cmd_inspect)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (UsageError, CorpusError, modelfile.ModelFileError, FileNotFoundError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
