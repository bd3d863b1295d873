"""Command-line interface.

Exit codes: 0 success, 2 usage error, 3 data/format error, 4 solver did not
converge and ``--strict`` was given.
"""
from __future__ import annotations

import argparse
import datetime as dt
import functools
import json
import logging
import sys
from pathlib import Path

from . import evaluate, ingest, relevance
from .centroid import CentroidModel
from .errors import DataError
from .linker import DEFAULT_K, build_link_index, link
from .models import load_model, save_model
from .ocsvm import KernelSpec, train_ocsvm
from .synth import baseline_corpus, separable_corpus
from .textprep import bundled_stopwords_text, load_stopwords, normalize
from .vectorspace import embed, fit

log = logging.getLogger("ctinovelty")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_CONVERGENCE = 0, 2, 3, 4


class UsageError(Exception):
    pass


class ConvergenceError(Exception):
    pass


def _date(value: str) -> dt.date:
    try:
        return dt.date.fromisoformat(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected YYYY-MM-DD, got {value!r}") from None


def _require(*paths):
    for p in paths:
        if p is not None and not Path(p).is_file():
            raise UsageError(f"no such file: {p}")


def _out_dir_ok(path):
    if path is not None and not Path(path).resolve().parent.is_dir():
        raise UsageError(f"output directory does not exist: {Path(path).parent}")


def _emit(text: str, out):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _tokenizer(args):
    return functools.partial(normalize, stopwords=load_stopwords(args.stopwords))


def _load_cves(args):
    entries, dropped = ingest.load_cve_feed(args.cve, args.format)
    if args.date_from or args.date_to:
        entries = ingest.filter_by_date(
            entries, args.date_from or dt.date.min, args.date_to or dt.date.max
        )
    return entries, dropped


def _labelled_scores(model, docs, tokenize):
    return [(d.label, model.score(embed(tokenize(d.text), model.vocab))) for d in docs]


def cmd_train(args):
    _require(args.cve, args.stopwords, args.dev)
    _out_dir_ok(args.out)
    tokenize = _tokenizer(args)
    entries, dropped = _load_cves(args)
    if not entries:
        raise DataError("no CVE entries left after date filtering")
    tokens = [tokenize(e.description) for e in entries]
    vocab = fit(tokens)
    vectors = [embed(t, vocab) for t in tokens]

    if args.model == "centroid":
        tau = 0.5 if args.threshold is None else args.threshold
        model = CentroidModel.fit(vectors, vocab, threshold=tau)
    else:
        kernel = KernelSpec(args.kernel, args.gamma)
        model = train_ocsvm(vectors, args.nu, kernel, tol=args.tol, vocab=vocab, max_iter=args.max_iter)
        if args.threshold is not None:
            model = model.with_threshold(args.threshold)
        if not model.converged and args.strict:
            raise ConvergenceError(f"solver hit the cap of {args.max_iter} pair updates")

    if args.dev:
        dev = ingest.load_jsonl(args.dev)
        tau = evaluate.pick_threshold(evaluate.sweep(_labelled_scores(model, dev, tokenize)))
        if args.model == "centroid":
            tau = min(max(tau, 0.0), 1.0)
        model = model.with_threshold(tau)
        print(f"threshold picked on dev set: {tau!r}", file=sys.stderr)

    save_model(model, args.out)
    print(f"N={vocab.corpus_size} V={len(vocab)} dropped={dropped}", file=sys.stderr)


def cmd_classify(args):
    _require(args.model_path, args.docs, args.stopwords)
    _out_dir_ok(args.out)
    model = load_model(args.model_path)
    if args.threshold is not None:
        model = model.with_threshold(args.threshold)
    tokenize = _tokenizer(args)
    docs = ingest.load_jsonl(args.docs)
    results = []
    for doc in docs:
        vec = embed(tokenize(doc.text), model.vocab)
        results.append((doc, model.predict(vec), model.score(vec)))
    ingest.write_results(results, args.out)


def cmd_rank(args):
    if (args.model_path is None) == (args.cve is None):
        raise UsageError("rank needs exactly one of --model or --cve")
    _require(args.model_path, args.cve, args.docs, args.stopwords)
    _out_dir_ok(args.out)
    tokenize = _tokenizer(args)
    if args.model_path:
        vocab = load_model(args.model_path).vocab
    else:
        entries, _ = _load_cves(args)
        if not entries:
            raise DataError("no CVE entries left after date filtering")
        vocab = fit([tokenize(e.description) for e in entries])
    ranked = relevance.top_k(ingest.load_jsonl(args.docs), vocab, args.k, tokenize)
    ingest.write_jsonl(({"id": d.id, "relevance_weight": w} for d, w in ranked), args.out)


def cmd_link(args):
    _require(args.cve, args.docs, args.stopwords)
    _out_dir_ok(args.out)
    entries, _ = _load_cves(args)
    index = build_link_index(entries, _tokenizer(args))
    docs = ingest.load_jsonl(args.docs)
    if args.skip_cited:
        docs = [d for d in docs if not evaluate.extract_cve_ids(d.text)]
    ingest.write_jsonl((link(d, index, args.k).to_json() for d in docs), args.out)


def cmd_eval(args):
    if (args.results is None) == (not args.baseline):
        raise UsageError("eval needs exactly one of --results or --baseline cve")
    _require(args.docs, args.results)
    _out_dir_ok(args.out)
    docs = ingest.load_jsonl(args.docs)
    if args.baseline:
        conf = evaluate.cve_baseline(docs)
    else:
        by_id = {d.id: d for d in docs}
        pairs = []
        for doc_id, verdict, _ in ingest.read_results(args.results):
            if doc_id not in by_id:
                raise DataError(f"result id {doc_id!r} not found among labelled documents")
            pairs.append((by_id[doc_id], verdict))
        conf = evaluate.confusion_from(pairs)
    _emit(json.dumps(evaluate.report(conf), indent=1) + "\n", args.out)


def cmd_sweep(args):
    _require(args.model_path, args.docs, args.stopwords)
    _out_dir_ok(args.out)
    model = load_model(args.model_path)
    docs = ingest.load_jsonl(args.docs)
    curve = evaluate.sweep(_labelled_scores(model, docs, _tokenizer(args)))
    _emit(evaluate.curve_to_csv(curve), args.out)
    print(f"best threshold: {evaluate.pick_threshold(curve)!r}", file=sys.stderr)


def cmd_stopwords_dump(args):
    _out_dir_ok(args.out)
    _emit(bundled_stopwords_text(), args.out)


def cmd_synth(args):
    out = Path(args.out_dir)
    if not out.is_dir():
        raise UsageError(f"no such directory: {out}")
    if args.kind == "separable":
        train, docs = separable_corpus(seed=args.seed)
        ingest.write_jsonl(
            ({"cve_id": e.cve_id, "description": e.description, "published": e.published.isoformat()}
             for e in train),
            out / "cve.jsonl",
        )
        half = len(docs) // 2
        for name, part in (("dev.jsonl", docs[:half]), ("test.jsonl", docs[half:])):
            ingest.write_jsonl(({"id": d.id, "text": d.text, "label": d.label} for d in part), out / name)
    else:
        docs = baseline_corpus(seed=args.seed)
        ingest.write_jsonl(({"id": d.id, "text": d.text, "label": d.label} for d in docs), out / "labelled.jsonl")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ctinovelty", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="JSON file of option values; explicit flags win")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help):
        p = sub.add_parser(name, help=help)
        p.set_defaults(func=func)
        return p

    def stopwords(p):
        p.add_argument("--stopwords", help="one-term-per-line stopword file (default: bundled list)")

    def cve_source(p, required=True):
        p.add_argument("--cve", required=required, help="CVE feed file")
        p.add_argument("--format", choices=["jsonl", "nvd-json"], default="jsonl")
        p.add_argument("--from", dest="date_from", type=_date, help="earliest publication date")
        p.add_argument("--to", dest="date_to", type=_date, help="latest publication date")

    p = add("train", cmd_train, "fit a novelty model on CVE descriptions")
    cve_source(p)
    stopwords(p)
    p.add_argument("--model", choices=["centroid", "ocsvm"], default="centroid")
    p.add_argument("--threshold", type=float, help="decision threshold (centroid default 0.5)")
    p.add_argument("--nu", type=float, default=0.5)
    p.add_argument("--kernel", choices=["linear", "rbf"], default="rbf")
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--max-iter", type=int, default=100_000)
    p.add_argument("--dev", help="labelled JSONL used to pick the threshold by best F1")
    p.add_argument("--strict", action="store_true", help="fail with exit code 4 if the solver does not converge")
    p.add_argument("--out", required=True)

    p = add("classify", cmd_classify, "label documents normal/anomalous with a trained model")
    p.add_argument("--model", dest="model_path", required=True)
    p.add_argument("--docs", required=True)
    p.add_argument("--threshold", type=float, help="override the model's threshold")
    stopwords(p)
    p.add_argument("--out", required=True)

    p = add("rank", cmd_rank, "rank documents by relevance weight")
    p.add_argument("--model", dest="model_path", help="take the vocabulary from this model file")
    cve_source(p, required=False)
    p.add_argument("--docs", required=True)
    p.add_argument("--k", type=int, default=3000)
    stopwords(p)
    p.add_argument("--out", required=True)

    p = add("link", cmd_link, "list the most similar CVE entries for each document")
    cve_source(p)
    p.add_argument("--docs", required=True)
    p.add_argument("--k", type=int, default=DEFAULT_K)
    p.add_argument("--skip-cited", action="store_true", help="skip documents that already cite a CVE id")
    stopwords(p)
    p.add_argument("--out", required=True)

    p = add("eval", cmd_eval, "precision/recall/F1 of results or of the CVE-id baseline")
    p.add_argument("--docs", required=True, help="labelled JSONL")
    p.add_argument("--results", help="results JSONL from classify")
    p.add_argument("--baseline", choices=["cve"])
    p.add_argument("--out")

    p = add("sweep", cmd_sweep, "precision/recall curve over thresholds as CSV")
    p.add_argument("--model", dest="model_path", required=True)
    p.add_argument("--docs", required=True, help="labelled JSONL")
    stopwords(p)
    p.add_argument("--out")

    p = add("stopwords-dump", cmd_stopwords_dump, "print the bundled stopword list")
    p.add_argument("--out")

    p = add("synth", cmd_synth, "write seeded synthetic fixture corpora")
    p.add_argument("--kind", choices=["separable", "cve-baseline"], default="separable")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", required=True)
    return parser


def _apply_config(parser, argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return parser.parse_args(argv)
    try:
        config = json.loads(Path(known.config).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        parser.error(f"cannot read --config: {exc}")
    if not isinstance(config, dict):
        parser.error("--config must hold a JSON object")
    # subparser defaults must be set on the subparser itself
    sub = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    command = next((a for a in (argv if argv is not None else sys.argv[1:]) if a in sub.choices), None)
    if command is None:
        return parser.parse_args(argv)
    subparser = sub.choices[command]
    by_flag = {opt: a for a in subparser._actions for opt in a.option_strings}
    values = {}
    for key, value in config.items():
        action = by_flag.get("--" + key.replace("_", "-"))
        if action is None:
            parser.error(f"--config: unknown option {key!r} for {command}")
        if action.type is not None and isinstance(value, str):
            value = action.type(value)
        values[action.dest] = value
    subparser.set_defaults(**values)
    for action in subparser._actions:
        if action.dest in values:
            action.required = False
    return parser.parse_args(argv)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (DataError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
