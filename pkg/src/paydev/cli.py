"""Command-line front end.

Subcommands: ingest, identities, features, evaluate, train, predict,
commits, synth. Every command echoes its effective configuration to
stderr, validates inputs before writing anything, and writes outputs
atomically (temp file + rename).

Exit codes:
  0 success
  1 internal error
  2 missing or unreadable input file
  3 schema or parse violation (git log, canonical JSONL, CSVs, config)
  4 feature columns do not match the model
  5 labels resolve to a single class (or an identity is unlabeled)
  6 stratification impossible (folds exceed a class count)

All randomness flows from the config seed through numpy's PCG64
(numpy.random.default_rng); reruns with the same inputs and config are
byte-identical.
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import tempfile

import numpy as np

from paydev import evaluation as ev
from paydev import features as feat
from paydev import identity as ident_mod
from paydev import labels as lab
from paydev import linkage, ml, synth
from paydev.config import Config, apply_overrides, load_config, validate
from paydev.errors import InputFileError, PaydevError, SchemaError
from paydev.ingest import (
    GIT_EXPORT_COMMAND,
    parse_git_log,
    read_canonical,
    write_canonical,
)


def _atomic_write(path, writer) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".paydev-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            writer(f)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _open_input(path):
    if path == "-":
        return sys.stdin
    try:
        return open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise InputFileError(f"cannot read {path}: {exc.strerror}") from None


def _emit(path, writer) -> None:
    if path:
        _atomic_write(path, writer)
    else:
        writer(sys.stdout)


def _build_config(args) -> Config:
    cfg = Config()
    if getattr(args, "config", None):
        with _open_input(args.config) as f:
            cfg = load_config(f)
    overrides = {}
    for key in (
        "seed",
        "min_commits",
        "feature_mode",
        "folds",
        "repeats",
        "coverage",
        "email_domains",
        "products",
        "forest_trees",
        "jobs",
    ):
        if hasattr(args, key):
            overrides[key] = getattr(args, key)
    cfg = validate(apply_overrides(cfg, **overrides))
    print(f"# config: {cfg.echo()}", file=sys.stderr)
    return cfg


def _read_records(path):
    with _open_input(path) as f:
        return read_canonical(f)


def _apply_product_filter(records, args, cfg):
    if not getattr(args, "product_map", None):
        return records
    if not cfg.products:
        raise SchemaError("--product-map given but config lists no products")
    with _open_input(args.product_map) as f:
        product_map = linkage.load_product_map(f)
    links = linkage.extract_links(records)
    kept, report = linkage.filter_by_products(records, links, product_map, set(cfg.products))
    print(
        f"# products: total={report.total} linked={report.linked} kept={report.kept} "
        f"unmapped={report.unmapped} disallowed={report.disallowed}",
        file=sys.stderr,
    )
    return kept


def _load_identities(args, records):
    if getattr(args, "identities", None):
        with _open_input(args.identities) as f:
            return read_identity_map(f)
    overrides = []
    if getattr(args, "overrides", None):
        with _open_input(args.overrides) as f:
            overrides = ident_mod.parse_overrides(f)
    return ident_mod.merge_identities(records, overrides)


def write_identity_map(identities, fileobj) -> None:
    for ident in identities:
        obj = {
            "id": ident.id,
            "names": sorted(ident.names),
            "emails": sorted(ident.emails),
            "commit_shas": sorted(ident.commit_shas),
        }
        fileobj.write(json.dumps(obj, ensure_ascii=False) + "\n")


def read_identity_map(fileobj):
    identities = []
    for lineno, line in enumerate(fileobj, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc.msg}", line=lineno) from None
        for key in ("id", "names", "emails", "commit_shas"):
            if key not in obj:
                raise SchemaError(f"missing field {key!r}", line=lineno)
        identities.append(
            ident_mod.Identity(
                id=obj["id"],
                names=set(obj["names"]),
                emails=set(obj["emails"]),
                commit_shas=set(obj["commit_shas"]),
            )
        )
    return identities


def _labeled_dataset(identities, records, label_set, cfg):
    """Join features with resolved labels; returns (dataset, commits_by_id,
    kept identities)."""
    records_by_sha = {r.sha: r for r in records}
    filtered = lab.study_filter(identities, cfg.min_commits)
    commits_by_id = {
        i.id: [records_by_sha[sha] for sha in i.commit_shas] for i in filtered
    }
    kept, ys = [], {}
    unlabeled = 0
    for ident in filtered:
        status = lab.resolve_status(ident.id, commits_by_id[ident.id], label_set)
        if status is None:
            unlabeled += 1
            continue
        kept.append(ident)
        ys[ident.id] = 1 if status == lab.HIRED else 0
    print(
        f"# labels: hired={sum(ys.values())} "
        f"volunteer={len(kept) - sum(ys.values())} unlabeled={unlabeled}",
        file=sys.stderr,
    )
    features_by_id = feat.compute_features(kept, records_by_sha)
    X, ids, columns = feat.feature_matrix(features_by_id, cfg.feature_mode)
    y = [ys[i] for i in ids]
    data = ml.make_dataset(X, y, columns, ids)
    return data, commits_by_id, kept


def _classifier_specs(cfg: Config) -> dict[str, ev.ClassifierSpec]:
    mtry = cfg.forest_mtry if cfg.forest_mtry > 0 else None
    return {
        "logit": ev.ClassifierSpec(
            "logit",
            {"l2": cfg.logit_l2, "max_iter": cfg.logit_max_iter, "tol": cfg.logit_tol},
        ),
        "rpart": ev.ClassifierSpec(
            "tree",
            {"minsplit": cfg.tree_minsplit, "cp": cfg.tree_cp, "maxdepth": cfg.tree_maxdepth},
        ),
        "randomforest": ev.ClassifierSpec(
            "forest",
            {"n_trees": cfg.forest_trees, "mtry": mtry, "n_jobs": cfg.jobs},
        ),
    }


def _report_table(report: ev.EvalReport) -> str:
    rows = [("classifier", "auc", "precision", "recall")]
    for name, agg in report.aggregate().items():
        def fmt(value):
            return "NA" if value is None else f"{value:.3f}"

        rows.append(
            (name, fmt(agg["auc_mean"]), fmt(agg["precision_mean"]), fmt(agg["recall_mean"]))
        )
    widths = [max(len(r[i]) for r in rows) for i in range(4)]
    return "\n".join(
        "  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)) for row in rows
    )


def _write_report(obj, args) -> None:
    if getattr(args, "format", "json") == "table":
        if isinstance(obj, ev.EvalReport):
            text = _report_table(obj)
        else:
            text = "\n\n".join(f"[{k}]\n{_report_table(v)}" for k, v in obj.items())
        _emit(args.out, lambda f: f.write(text + "\n"))
    else:
        if isinstance(obj, ev.EvalReport):
            payload = obj.as_dict()
        else:
            payload = {k: v.as_dict() for k, v in obj.items()}
        _emit(args.out, lambda f: f.write(json.dumps(payload, sort_keys=True, indent=1) + "\n"))


# ----------------------------------------------------------------- commands


def cmd_ingest(args) -> int:
    _build_config(args)
    if os.path.isdir(args.source):
        proc = subprocess.run(
            ["git", "-C", args.source, "log", "--all", "--no-merges", "--date-order",
             "--pretty=format:%x1e%H%x1f%an%x1f%ae%x1f%at%x1f%ad",
             "--date=format:%Y-%m-%d %H:%M:%S %z", "--numstat"],
            capture_output=True,
        )
        if proc.returncode != 0:
            raise InputFileError(
                f"git log failed: {proc.stderr.decode('utf-8', 'replace').strip()}"
            )
        records = parse_git_log(proc.stdout)
    elif args.source == "-":
        records = parse_git_log(sys.stdin.buffer.read())
    else:
        try:
            with open(args.source, "rb") as f:
                records = parse_git_log(f)
        except OSError as exc:
            raise InputFileError(f"cannot read {args.source}: {exc.strerror}") from None
    print(f"# ingested {len(records)} commits", file=sys.stderr)
    _emit(args.out, lambda f: write_canonical(records, f))
    return 0


def cmd_identities(args) -> int:
    _build_config(args)
    records = _read_records(args.records)
    overrides = []
    if args.overrides:
        with _open_input(args.overrides) as f:
            overrides = ident_mod.parse_overrides(f)
    identities = ident_mod.merge_identities(records, overrides)
    report = ident_mod.identity_report(identities)
    if args.out:
        _atomic_write(args.out, lambda f: write_identity_map(identities, f))
        out = sys.stdout
    else:
        write_identity_map(identities, sys.stdout)
        out = sys.stderr
    print(f"{'identity':<40} {'aliases':>7} {'commits':>7}", file=out)
    for ident_id, aliases, commits in report:
        print(f"{ident_id:<40} {aliases:>7} {commits:>7}", file=out)
    return 0


def cmd_features(args) -> int:
    cfg = _build_config(args)
    records = _read_records(args.records)
    records = _apply_product_filter(records, args, cfg)
    identities = _load_identities(args, records)
    records_by_sha = {r.sha: r for r in records}
    features_by_id = feat.compute_features(identities, records_by_sha)
    _emit(args.out, lambda f: feat.write_features_csv(features_by_id, f, mode=args.mode))
    return 0


def cmd_evaluate(args) -> int:
    cfg = _build_config(args)
    with _open_input(args.labels) as f:
        label_set = lab.load_labels(f)
    commits_by_id = None
    if args.features:
        # Features-only mode: the baselines need raw commits, so they are
        # skipped and only the three classifiers run.
        with _open_input(args.features) as f:
            X, ids, columns = feat.read_features_csv(f)
        rows, y = [], []
        for i, ident_id in enumerate(ids):
            status = label_set.entries.get(ident_id)
            if status is not None:
                rows.append(i)
                y.append(1 if status == lab.HIRED else 0)
        data = ml.make_dataset(X[rows], y, columns, [ids[i] for i in rows])
        print("# baselines skipped (no canonical records given)", file=sys.stderr)
    else:
        if not args.records:
            raise InputFileError("evaluate needs canonical records or --features")
        records = _read_records(args.records)
        records = _apply_product_filter(records, args, cfg)
        identities = _load_identities(args, records)
        data, commits_by_id, _ = _labeled_dataset(identities, records, label_set, cfg)
    ml.check_training(data)

    folds = ev.stratified_kfold(len(data.y), data.y, k=cfg.folds, repeats=cfg.repeats,
                                seed=cfg.seed)
    report = ev.cross_validate(
        data, _classifier_specs(cfg), folds, seed=cfg.seed, config=cfg.as_dict()
    )
    if commits_by_id is not None:
        for spec in ev.default_baselines(cfg.email_domains):
            report.cells.append(ev.baseline_cell(spec, commits_by_id, data.ids, data.y))
    _write_report(report, args)
    return 0


def cmd_train(args) -> int:
    cfg = _build_config(args)
    with _open_input(args.labels) as f:
        label_set = lab.load_labels(f)
    with _open_input(args.features) as f:
        X, ids, columns = feat.read_features_csv(f)
    if label_set.periods:
        print(
            "# note: dated periods in the labels file need --records to resolve; "
            "direct statuses only",
            file=sys.stderr,
        )
    rows, y = [], []
    for i, ident_id in enumerate(ids):
        status = label_set.entries.get(ident_id)
        if status is None:
            continue
        rows.append(i)
        y.append(1 if status == lab.HIRED else 0)
    data = ml.make_dataset(X[rows], y, columns, [ids[i] for i in rows])
    spec = _classifier_specs(cfg)[args.classifier]
    model = ev.fit_classifier(spec, data, seed_parts=(cfg.seed, 0, 0))
    _emit(args.out, lambda f: ml.save_model(model, f))
    if args.introspect:
        print(ml.introspect(model), file=sys.stderr)
    return 0


def cmd_predict(args) -> int:
    _build_config(args)
    with _open_input(args.model) as f:
        model = ml.load_model(f)
    if args.features:
        with _open_input(args.features) as f:
            X, row_ids, columns = feat.read_features_csv(f)
    else:
        records = _read_records(args.records)
        identities = _load_identities(args, records)
        records_by_sha = {r.sha: r for r in records}
        if list(model.columns) == feat.COMMIT_FEATURE_COLUMNS:
            xs, row_ids = [], []
            for ident in identities:
                commits = [records_by_sha[sha] for sha in ident.commit_shas]
                aggregates = feat.developer_features(commits)
                X_dev, shas, columns = feat.commit_features(commits, aggregates)
                xs.append(X_dev)
                row_ids.extend(shas)
            X = np.vstack(xs)
        else:
            features_by_id = feat.compute_features(identities, records_by_sha)
            X, row_ids, columns = feat.feature_matrix(features_by_id, mode="all")
    probabilities = ml.predict_proba(model, X, columns=columns)

    def writer(f):
        f.write("id,probability,class\n")
        for row_id, p in zip(row_ids, probabilities):
            label = lab.HIRED if p >= 0.5 else lab.VOLUNTEER
            f.write(f"{row_id},{p:.6f},{label}\n")

    _emit(args.out, writer)
    return 0


def cmd_commits(args) -> int:
    cfg = _build_config(args)
    with _open_input(args.labels) as f:
        label_set = lab.load_labels(f)
    records = _read_records(args.records)
    records = _apply_product_filter(records, args, cfg)
    identities = _load_identities(args, records)
    records_by_sha = {r.sha: r for r in records}
    filtered = lab.study_filter(identities, cfg.min_commits)
    commits_by_id = {
        i.id: [records_by_sha[sha] for sha in i.commit_shas] for i in filtered
    }
    all_report, rest_report = ev.per_commit_experiment(
        filtered,
        commits_by_id,
        label_set,
        _classifier_specs(cfg),
        coverage=cfg.coverage,
        domains=cfg.email_domains,
        seed=cfg.seed,
        config=cfg.as_dict(),
    )
    _write_report({"all_commits": all_report, "least_active": rest_report}, args)
    return 0


def cmd_synth(args) -> int:
    cfg = _build_config(args)
    spec = synth.SynthSpec(
        n_devs=args.devs,
        hired_share=args.hired_share,
        commits_low=args.commits_low,
        commits_high=args.commits_high,
    )
    spec = synth.spec_with_profiles(spec, args.profiles)
    records, labels = synth.generate_synthetic_corpus(spec, seed=cfg.seed)
    print(f"# synthesized {len(records)} commits for {args.devs} developers",
          file=sys.stderr)
    _emit(args.out, lambda f: write_canonical(records, f))
    _atomic_write(args.labels_out, lambda f: synth.write_labels_csv(labels, f))
    return 0


# ------------------------------------------------------------------ parser


def _add_common(sub, out_default=None):
    sub.add_argument("--config", help="flat key=value config file")
    sub.add_argument("--seed", type=int, help="master RNG seed (overrides config)")
    sub.add_argument("--out", default=out_default, help="output path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="paydev",
        description="Predict paid vs volunteer contributors from commit history.",
        epilog=(
            "exit codes: 1 internal error, 2 missing input, 3 schema/parse "
            "violation, 4 column mismatch, 5 single-class labels, "
            "6 stratification impossible"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "ingest",
        help="parse a git-log export (or run git on a repo) into canonical JSONL",
        description=(
            "Parse the output of the documented export command into the canonical "
            f"JSON-lines commit format. Export command:\n\n  {GIT_EXPORT_COMMAND}"
        ),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("source", help="export file, '-' for stdin, or a git repository path")
    _add_common(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("identities", help="merge author aliases into identities")
    p.add_argument("records", help="canonical JSONL file")
    p.add_argument("--overrides", help="manual merge/split rules file")
    _add_common(p)
    p.set_defaults(func=cmd_identities)

    p = sub.add_parser("features", help="compute per-developer metrics CSV")
    p.add_argument("records", help="canonical JSONL file")
    p.add_argument("--identities", help="identity map JSONL (default: recompute)")
    p.add_argument("--overrides", help="identity override rules")
    p.add_argument("--mode", choices=["all", "no_volume"], default="all")
    p.add_argument("--product-map", help="issue_id,product CSV for product filtering")
    _add_common(p)
    p.set_defaults(func=cmd_features)

    p = sub.add_parser(
        "evaluate", help="cross-validate the three classifiers plus baselines"
    )
    p.add_argument("records", nargs="?", help="canonical JSONL file")
    p.add_argument("--features", help="features CSV (classifiers only, no baselines)")
    p.add_argument("--labels", required=True, help="labels CSV")
    p.add_argument("--identities", help="identity map JSONL (default: recompute)")
    p.add_argument("--overrides", help="identity override rules")
    p.add_argument("--product-map", help="issue_id,product CSV for product filtering")
    p.add_argument("--format", choices=["json", "table"], default="json")
    p.add_argument("--min-commits", dest="min_commits", type=int)
    p.add_argument("--feature-mode", dest="feature_mode", choices=["all", "no_volume"])
    p.add_argument("--folds", type=int)
    p.add_argument("--repeats", type=int)
    p.add_argument("--forest-trees", dest="forest_trees", type=int)
    p.add_argument("--jobs", type=int)
    _add_common(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("train", help="fit one classifier and save the model file")
    p.add_argument("features", help="features CSV")
    p.add_argument("--labels", required=True, help="labels CSV")
    p.add_argument(
        "--classifier", required=True, choices=["logit", "rpart", "randomforest"]
    )
    p.add_argument("--introspect", action="store_true", help="print a model report")
    p.add_argument("--forest-trees", dest="forest_trees", type=int)
    _add_common(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="score developers (or commits) with a model")
    p.add_argument("model", help="PAYDEVMODEL/1 file")
    p.add_argument("--features", help="features CSV")
    p.add_argument("--records", help="canonical JSONL (alternative to --features)")
    p.add_argument("--identities", help="identity map JSONL")
    _add_common(p)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser(
        "commits", help="train on the most active developers, score per commit"
    )
    p.add_argument("records", help="canonical JSONL file")
    p.add_argument("--labels", required=True, help="labels CSV")
    p.add_argument("--identities", help="identity map JSONL (default: recompute)")
    p.add_argument("--product-map", help="issue_id,product CSV for product filtering")
    p.add_argument("--format", choices=["json", "table"], default="json")
    p.add_argument("--min-commits", dest="min_commits", type=int)
    p.add_argument("--coverage", type=float)
    p.add_argument("--forest-trees", dest="forest_trees", type=int)
    p.add_argument("--jobs", type=int)
    _add_common(p)
    p.set_defaults(func=cmd_commits)

    p = sub.add_parser("synth", help="generate a synthetic corpus with known labels")
    p.add_argument("--labels-out", required=True, help="labels CSV output path")
    p.add_argument("--profiles", choices=["separable", "overlapping"],
                   default="separable")
    p.add_argument("--devs", type=int, default=200)
    p.add_argument("--hired-share", dest="hired_share", type=float, default=0.5)
    p.add_argument("--commits-low", dest="commits_low", type=int, default=120)
    p.add_argument("--commits-high", dest="commits_high", type=int, default=280)
    _add_common(p)
    p.set_defaults(func=cmd_synth)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PaydevError as exc:
        print(f"paydev {args.command}: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"paydev {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - last resort
        print(f"paydev {args.command}: internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
