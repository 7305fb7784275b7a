"""Command-line entry point: train, evaluate, score, analyze, explain.

Configuration is a versioned JSON file; individual flags override file
values, and built-in defaults back both. Every command writes its outputs
under a run directory together with a manifest.json recording the fully
resolved configuration (including every convention choice: subtree mode,
frequency counting, log base, rounding) plus inputs, outputs, and timing.

Exit codes: 0 success, 1 internal error, 2 usage/config/data error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from importlib import resources

from . import __version__
from .analytics import (
    BinnedMeansAccumulator,
    DistributionAccumulator,
    binned_means_csv,
    distribution_csv,
    iter_docs_jsonl,
    read_scored_jsonl,
    score_boxes_csv,
    score_chunk,
    score_corpus,
    score_percentiles,
    write_scored_jsonl,
)
from .conllu import iter_parse_conllu, parse_conllu, parse_conllu_file
from .errors import ICScoreError, MissingScoresError, UsageError
from .evaluation import (
    SCHEMES,
    ModelSpec,
    aggregate_labels,
    get_scheme,
    heldout_eval,
    kfold_cv,
)
from .features import (
    CANONICAL_FAMILIES,
    DEFAULT_FAMILIES,
    DocumentVectorizer,
    FeatureSpace,
)
from .lexicon import load_categories_file, load_lexicon_file
from .model_io import MODEL_KINDS, fit_model, load_model, make_model, save_model

logger = logging.getLogger(__name__)

CONFIG_VERSION = 1

DEFAULT_CONFIG = {
    "config_version": CONFIG_VERSION,
    "lexicon": "sample",
    "categories": None,
    "families": list(DEFAULT_FAMILIES),
    "subtree_mode": "binary",
    "max_edges": 5,
    "min_freq": 5,
    "freq_counting": "occurrences",
    "model": "gbt",
    "model_params": {},
    "seed": 0,
    "scheme": "seven",
    "workers": 1,
    "chunk_size": 512,
    "log_base": "e",
    "rounding": "half_up",
}

_FLAG_TO_KEY = {
    "lexicon": "lexicon",
    "categories": "categories",
    "subtree_mode": "subtree_mode",
    "max_edges": "max_edges",
    "min_freq": "min_freq",
    "freq_counting": "freq_counting",
    "model": "model",
    "seed": "seed",
    "scheme": "scheme",
    "workers": "workers",
    "chunk_size": "chunk_size",
    "log_base": "log_base",
    "rounding": "rounding",
}

_MODEL_PARAM_FLAGS = {
    "rounds": "n_rounds",
    "max_depth": "max_depth",
    "learning_rate": "learning_rate",
    "subsample": "subsample",
}


def load_config(path: str | None, args: argparse.Namespace) -> dict:
    config = json.loads(json.dumps(DEFAULT_CONFIG))  # deep copy
    if path is not None:
        if not os.path.exists(path):
            raise UsageError(f"config file not found: {path}")
        with open(path, encoding="utf-8") as fh:
            try:
                loaded = json.load(fh)
            except json.JSONDecodeError as exc:
                raise UsageError(f"config is not valid JSON: {exc}") from None
        unknown = set(loaded) - set(DEFAULT_CONFIG)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        version = loaded.get("config_version", CONFIG_VERSION)
        if version != CONFIG_VERSION:
            raise UsageError(f"unsupported config_version {version!r}")
        config.update(loaded)
    for flag, key in _FLAG_TO_KEY.items():
        value = getattr(args, flag, None)
        if value is not None:
            config[key] = value
    if getattr(args, "families", None):
        config["families"] = [f.strip() for f in args.families.split(",") if f.strip()]
    for flag, key in _MODEL_PARAM_FLAGS.items():
        value = getattr(args, flag, None)
        if value is not None:
            config["model_params"][key] = value
    _validate_config(config)
    return config


def _validate_config(config: dict) -> None:
    if config["model"] not in MODEL_KINDS:
        raise UsageError(f"unknown model {config['model']!r}; choose from {MODEL_KINDS}")
    if config["scheme"] not in SCHEMES:
        raise UsageError(
            f"unknown scheme {config['scheme']!r}; choose from {sorted(SCHEMES)}"
        )
    bad = set(config["families"]) - set(CANONICAL_FAMILIES)
    if bad:
        raise UsageError(f"unknown families: {sorted(bad)}")
    for key in ("max_edges", "min_freq", "workers", "chunk_size"):
        if not isinstance(config[key], int) or config[key] < 1:
            raise UsageError(f"{key} must be a positive integer")
    lex = config["lexicon"]
    if lex not in (None, "sample") and not os.path.exists(lex):
        raise UsageError(f"lexicon file not found: {lex}")
    cats = config["categories"]
    if cats is not None and not os.path.exists(cats):
        raise UsageError(f"category dictionary not found: {cats}")


def _load_resources(config: dict):
    lex_path = config["lexicon"]
    if lex_path == "sample":
        ref = resources.files("icscore").joinpath("data/sample_lexicon.tsv")
        with resources.as_file(ref) as p:
            lexicon = load_lexicon_file(str(p))
    elif lex_path is not None:
        lexicon = load_lexicon_file(lex_path)
    else:
        lexicon = None
    categories = (
        load_categories_file(config["categories"])
        if config["categories"] is not None
        else None
    )
    return lexicon, categories


def _vectorizer_params(config: dict, lexicon, categories) -> dict:
    return {
        "lexicon": lexicon,
        "categories": categories,
        "families": tuple(config["families"]),
        "subtree_mode": config["subtree_mode"],
        "max_edges": config["max_edges"],
        "min_freq": config["min_freq"],
        "freq_counting": config["freq_counting"],
    }


def _model_params(config: dict) -> dict:
    params = dict(config["model_params"])
    if config["model"] in ("gbt", "wordcount", "sentiment"):
        params.setdefault("seed", config["seed"])
    return params


def _require_file(path: str, what: str) -> str:
    if not os.path.exists(path):
        raise UsageError(f"{what} not found: {path}")
    return path


def _load_corpus(path: str):
    _require_file(path, "corpus")
    if path.endswith(".jsonl"):
        return list(iter_docs_jsonl(path))
    return parse_conllu_file(path)


def _iter_corpus(path: str):
    _require_file(path, "corpus")
    if path.endswith(".jsonl"):
        yield from iter_docs_jsonl(path)
        return
    with open(path, encoding="utf-8") as fh:
        yield from iter_parse_conllu(fh)


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _manifest(out_dir: str, payload: dict) -> None:
    payload = dict(payload)
    payload["icscore_version"] = __version__
    with open(os.path.join(out_dir, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def cmd_train(args: argparse.Namespace) -> int:
    config = load_config(args.config, args)
    start = time.monotonic()
    docs = _load_corpus(args.train)
    lexicon, categories = _load_resources(config)
    scheme = get_scheme(config["scheme"])
    labels = []
    for doc in docs:
        if doc.label is None:
            raise UsageError(f"training document {doc.doc_id!r} has no `# ic` label")
        labels.append(doc.label)
    y = aggregate_labels(labels, scheme)

    vec = DocumentVectorizer(**_vectorizer_params(config, lexicon, categories))
    vec.fit(docs)
    space = vec.space_
    X = vec.transform(docs)
    model = make_model(config["model"], _model_params(config))
    fit_model(
        model, X, y, feature_names=list(space.feature_ids), space_ref=space.fingerprint()
    )

    os.makedirs(args.out, exist_ok=True)
    model_path = os.path.join(args.out, "model.json")
    space_path = os.path.join(args.out, "space.json")
    save_model(model, model_path)
    space.save(space_path)
    outputs = ["model.json", "space.json"]
    if space.subtree_ids:
        _write(os.path.join(args.out, "subtrees.txt"), space.subtree_vocab_lines())
        outputs.append("subtrees.txt")
    train_loss = getattr(model, "train_loss_", None)
    if train_loss is None and hasattr(model, "gbt_"):
        train_loss = model.gbt_.train_loss_
    if train_loss is not None:
        log_lines = ["round,train_logloss"]
        log_lines += [f"{i},{loss!r}" for i, loss in enumerate(train_loss)]
        _write(os.path.join(args.out, "training_log.csv"), "\n".join(log_lines) + "\n")
        outputs.append("training_log.csv")

    _manifest(
        args.out,
        {
            "command": "train",
            "config": config,
            "inputs": {"train": args.train},
            "outputs": outputs,
            "counts": {"documents": len(docs), "features": space.dimension},
            "wall_time_s": time.monotonic() - start,
        },
    )
    logger.info("trained %s on %d docs, %d features", config["model"], len(docs), space.dimension)
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    config = load_config(args.config, args)
    start = time.monotonic()
    lexicon, categories = _load_resources(config)
    spec = ModelSpec(
        model=config["model"],
        model_params=_model_params(config),
        vectorizer_params=_vectorizer_params(config, lexicon, categories),
    )
    scheme = get_scheme(config["scheme"])
    train_docs = _load_corpus(args.train)
    os.makedirs(args.out, exist_ok=True)
    outputs = []

    if args.mode == "cv":
        result = kfold_cv(train_docs, args.k, spec, seed=config["seed"], scheme=scheme)
        _write(
            os.path.join(args.out, "report.json"),
            json.dumps(result.to_json_dict(), indent=2, sort_keys=True) + "\n",
        )
        lines = [
            f"{result.model_desc}: {args.k}-fold cross-validation",
            f"mean weighted F1: {result.mean_f1:.4f} (std {result.std_f1:.4f})",
            f"mean MSE: {result.mean_mse:.4f}",
            "",
            "pooled confusion (rows true, cols predicted):",
        ]
        lines.append("," + ",".join(result.class_names))
        for name, row in zip(result.class_names, result.pooled_confusion):
            lines.append(name + "," + ",".join(str(int(v)) for v in row))
        lines.append("")
        for i, fold in enumerate(result.folds):
            lines.append(f"fold {i}: weighted F1 {fold.report.weighted_f1:.4f}")
        _write(os.path.join(args.out, "report.txt"), "\n".join(lines) + "\n")
        conf_lines = ["true\\pred," + ",".join(result.class_names)]
        for name, row in zip(result.class_names, result.pooled_confusion):
            conf_lines.append(name + "," + ",".join(str(int(v)) for v in row))
        _write(os.path.join(args.out, "confusion.csv"), "\n".join(conf_lines) + "\n")
        counts = {"documents": len(train_docs), "folds": args.k}
    else:
        if not args.test:
            raise UsageError("heldout mode requires --test")
        test_docs = _load_corpus(args.test)
        report = heldout_eval(train_docs, test_docs, spec, scheme=scheme)
        _write(
            os.path.join(args.out, "report.json"),
            json.dumps(report.to_json_dict(), indent=2, sort_keys=True) + "\n",
        )
        _write(os.path.join(args.out, "report.txt"), report.to_text())
        _write(os.path.join(args.out, "confusion.csv"), report.confusion_csv())
        counts = {"train_documents": len(train_docs), "test_documents": len(test_docs)}

    outputs = ["report.json", "report.txt", "confusion.csv"]
    _manifest(
        args.out,
        {
            "command": "evaluate",
            "mode": args.mode,
            "config": config,
            "inputs": {"train": args.train, "test": args.test},
            "outputs": outputs,
            "counts": counts,
            "wall_time_s": time.monotonic() - start,
        },
    )
    return 0


def _worker_init(model_path: str, space_path: str, config_json: str) -> None:
    global _W_MODEL, _W_VEC
    config = json.loads(config_json)
    lexicon, categories = _load_resources(config)
    space = FeatureSpace.load(space_path)
    _W_MODEL = load_model(model_path)
    _W_VEC = DocumentVectorizer.from_space(space, lexicon=lexicon, categories=categories)


def _worker_score(doc_texts: list[str]) -> list[dict]:
    docs = parse_conllu("".join(doc_texts))
    return [r.to_json_dict() for r in score_chunk(docs, _W_MODEL, _W_VEC)]


def cmd_score(args: argparse.Namespace) -> int:
    config = load_config(args.config, args)
    start = time.monotonic()
    model_path = _require_file(args.model_path, "model artifact")
    space_path = _require_file(args.space, "space artifact")
    model = load_model(model_path)
    space = FeatureSpace.load(space_path)
    lexicon, categories = _load_resources(config)
    vec = DocumentVectorizer.from_space(space, lexicon=lexicon, categories=categories)

    os.makedirs(args.out, exist_ok=True)
    scored_path = os.path.join(args.out, "scored.jsonl")
    n = 0
    if config["workers"] > 1:
        from .conllu import serialize_document

        def doc_text_chunks():
            chunk: list[str] = []
            for doc in _iter_corpus(args.input):
                chunk.append(serialize_document(doc))
                if len(chunk) >= config["chunk_size"]:
                    yield chunk
                    chunk = []
            if chunk:
                yield chunk

        with open(scored_path, "w", encoding="utf-8") as sink:
            with ProcessPoolExecutor(
                max_workers=config["workers"],
                initializer=_worker_init,
                initargs=(model_path, space_path, json.dumps(config)),
            ) as pool:
                for records in pool.map(_worker_score, doc_text_chunks()):
                    for rec in records:
                        sink.write(json.dumps(rec, sort_keys=True) + "\n")
                        n += 1
    else:
        records = score_corpus(
            _iter_corpus(args.input), model, vec, chunk_size=config["chunk_size"]
        )
        with open(scored_path, "w", encoding="utf-8") as sink:
            n = write_scored_jsonl(records, sink)

    elapsed = time.monotonic() - start
    throughput = n / elapsed if elapsed > 0 else float("inf")
    logger.info("scored %d documents in %.1fs (%.0f docs/s)", n, elapsed, throughput)
    _manifest(
        args.out,
        {
            "command": "score",
            "config": config,
            "inputs": {"input": args.input, "model": model_path, "space": space_path},
            "outputs": ["scored.jsonl"],
            "counts": {"documents": n},
            "wall_time_s": elapsed,
            "throughput_docs_per_s": throughput,
        },
    )
    return 0


def cmd_analyze(args: argparse.Namespace) -> int:
    config = load_config(args.config, args)
    start = time.monotonic()
    records = read_scored_jsonl(_require_file(args.scored, "scored file"))
    by = tuple(f.strip() for f in args.by.split(",") if f.strip())
    os.makedirs(args.out, exist_ok=True)

    dist_acc = DistributionAccumulator(by)
    bin_acc = BinnedMeansAccumulator(
        by, log_base=config["log_base"], rounding=config["rounding"]
    )
    for rec in records:
        dist_acc.add(rec)
        bin_acc.add(rec)
    _write(
        os.path.join(args.out, "distribution.csv"),
        distribution_csv(dist_acc.finalize(), by),
    )
    _write(
        os.path.join(args.out, "binned_means.csv"),
        binned_means_csv(bin_acc.finalize(), by),
    )
    outputs = ["distribution.csv", "binned_means.csv"]
    boxes_note = None
    try:
        summaries = score_percentiles(records, by)
        _write(os.path.join(args.out, "score_boxes.csv"), score_boxes_csv(summaries, by))
        outputs.append("score_boxes.csv")
    except MissingScoresError as exc:
        boxes_note = str(exc)
        logger.warning("score boxes skipped: %s", exc)

    _manifest(
        args.out,
        {
            "command": "analyze",
            "config": config,
            "inputs": {"scored": args.scored},
            "outputs": outputs,
            "counts": {
                "records": len(records),
                "excluded_zero_length": bin_acc.excluded_zero_length,
            },
            "group_by": list(by),
            "score_boxes_note": boxes_note,
            "wall_time_s": time.monotonic() - start,
        },
    )
    return 0


def cmd_explain(args: argparse.Namespace) -> int:
    config = load_config(args.config, args)
    model = load_model(_require_file(args.model_path, "model artifact"))
    space = FeatureSpace.load(_require_file(args.space, "space artifact"))
    lexicon, categories = _load_resources(config)
    vec = DocumentVectorizer.from_space(space, lexicon=lexicon, categories=categories)
    if not hasattr(model, "explain"):
        raise UsageError("this model kind does not support attribution")

    docs = _load_corpus(args.input)
    if args.doc_id is not None:
        matches = [d for d in docs if d.doc_id == args.doc_id]
        if not matches:
            raise UsageError(f"document {args.doc_id!r} not found in {args.input}")
        doc = matches[0]
    else:
        if not docs:
            raise UsageError(f"no documents in {args.input}")
        doc = docs[0]

    x = vec.transform_one(doc)
    attribution = model.explain(x, class_id=args.band)
    values = dict(zip(space.feature_ids, x))
    ranked = sorted(attribution.contributions.items(), key=lambda kv: -kv[1])
    top = ranked[: args.top]
    bottom = [kv for kv in ranked[-args.top:] if kv not in top]

    lines = [
        f"document: {doc.doc_id}",
        f"class: {attribution.class_id}",
        f"raw score: {attribution.total:.6f}",
        "",
        f"{'feature':<32} {'value':>10} {'contribution':>14}",
        f"{'<bias>':<32} {'':>10} {attribution.bias:>14.6f}",
    ]
    for name, contrib in top:
        lines.append(f"{name:<32} {values.get(name, 0.0):>10.4f} {contrib:>14.6f}")
    if bottom:
        lines.append("...")
        for name, contrib in bottom:
            lines.append(f"{name:<32} {values.get(name, 0.0):>10.4f} {contrib:>14.6f}")
    text = "\n".join(lines) + "\n"
    print(text, end="")
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        _write(os.path.join(args.out, "explain.txt"), text)
        _manifest(
            args.out,
            {
                "command": "explain",
                "config": config,
                "inputs": {
                    "input": args.input,
                    "model": args.model_path,
                    "space": args.space,
                },
                "outputs": ["explain.txt"],
                "counts": {"documents": len(docs)},
            },
        )
    return 0


def _add_config_flags(p: argparse.ArgumentParser, training: bool = True) -> None:
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--lexicon", help="keyword lexicon path, or 'sample'")
    p.add_argument("--categories", help="category dictionary path")
    p.add_argument("--seed", type=int)
    p.add_argument("--scheme", choices=list(SCHEMES))
    p.add_argument("--workers", type=int)
    p.add_argument("--chunk-size", dest="chunk_size", type=int)
    p.add_argument("--log-base", dest="log_base")
    p.add_argument("--rounding", choices=["half_up", "half_even"])
    if not training:
        # score/explain take trained artifacts; the model kind and fitting
        # knobs live inside them, and --model names the artifact instead.
        return
    p.add_argument("--families", help="comma-separated feature families")
    p.add_argument("--subtree-mode", dest="subtree_mode", choices=["binary", "normalized"])
    p.add_argument("--max-edges", dest="max_edges", type=int)
    p.add_argument("--min-freq", dest="min_freq", type=int)
    p.add_argument(
        "--freq-counting", dest="freq_counting", choices=["occurrences", "documents"]
    )
    p.add_argument("--model", choices=list(MODEL_KINDS))
    p.add_argument("--rounds", type=int, help="boosting rounds")
    p.add_argument("--max-depth", dest="max_depth", type=int)
    p.add_argument("--learning-rate", dest="learning_rate", type=float)
    p.add_argument("--subsample", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="icscore",
        description="Integrative complexity scoring over CoNLL-U corpora",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="fit a feature space and model")
    p.add_argument("--train", required=True, help="labeled CoNLL-U corpus")
    p.add_argument("--out", required=True, help="run directory")
    _add_config_flags(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="cross-validate or heldout-evaluate")
    p.add_argument("--mode", choices=["cv", "heldout"], default="cv")
    p.add_argument("--train", required=True)
    p.add_argument("--test", help="heldout corpus (heldout mode)")
    p.add_argument("--k", type=int, default=5, help="fold count (cv mode)")
    p.add_argument("--out", required=True)
    _add_config_flags(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("score", help="score a corpus with trained artifacts")
    p.add_argument("--model", dest="model_path", required=True, help="model.json")
    p.add_argument("--space", required=True, help="space.json")
    p.add_argument("--input", required=True, help=".conllu corpus or .jsonl records")
    p.add_argument("--out", required=True)
    _add_config_flags(p, training=False)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("analyze", help="aggregate a scored.jsonl file")
    p.add_argument("--scored", required=True)
    p.add_argument("--by", default="community,kind", help="grouping fields")
    p.add_argument("--out", required=True)
    _add_config_flags(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("explain", help="per-feature contributions for one document")
    p.add_argument("--model", dest="model_path", required=True)
    p.add_argument("--space", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--doc-id", dest="doc_id")
    p.add_argument("--band", type=int, help="class to explain (default: predicted)")
    p.add_argument("--top", type=int, default=10)
    p.add_argument("--out", help="optional run directory")
    _add_config_flags(p, training=False)
    p.set_defaults(func=cmd_explain)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except (ICScoreError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception:  # pragma: no cover - internal failure path
        import traceback

        traceback.print_exc()
        return 1


if __name__ == "__main__":
    sys.exit(main())
