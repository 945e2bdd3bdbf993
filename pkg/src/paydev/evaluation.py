"""Metrics, cross-validation, baseline classifiers and the per-commit
experiment.

AUC is the Mann-Whitney statistic (ties get half credit), precision is NA
when nothing is predicted positive, and every random decision derives from
a master seed through numpy's PCG64 so repeated runs are identical.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from paydev import features as feat
from paydev import labels as lab
from paydev import ml
from paydev.errors import SingleClassError, StratificationError
from paydev.ingest import to_local


def roc_auc(scores, labels) -> float:
    """P(score_pos > score_neg) + 0.5 P(tie) over all pos/neg pairs."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    n_pos = int(np.sum(labels == 1))
    n_neg = len(labels) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise SingleClassError("roc_auc needs both classes")
    _, inverse, counts = np.unique(scores, return_inverse=True, return_counts=True)
    ends = np.cumsum(counts)
    avg_rank = (ends - counts + 1 + ends) / 2.0  # 1-based average rank per value
    ranks = avg_rank[inverse]
    pos_rank_sum = float(ranks[labels == 1].sum())
    return (pos_rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def confusion(predictions, labels):
    """(tp, fp, tn, fn) with 1 = hired as the positive class."""
    predictions = np.asarray(predictions)
    labels = np.asarray(labels)
    tp = int(np.sum((predictions == 1) & (labels == 1)))
    fp = int(np.sum((predictions == 1) & (labels == 0)))
    tn = int(np.sum((predictions == 0) & (labels == 0)))
    fn = int(np.sum((predictions == 0) & (labels == 1)))
    return tp, fp, tn, fn


def precision_recall(predictions, labels):
    """(precision, recall); precision is None when tp+fp = 0."""
    tp, fp, _, fn = confusion(predictions, labels)
    precision = tp / (tp + fp) if tp + fp else None
    recall = tp / (tp + fn) if tp + fn else None
    return precision, recall


def stratified_kfold(n, labels, k=10, repeats=10, seed=0):
    """Per repeat, a list of k test-index arrays.

    Each class is shuffled and dealt round-robin starting at a random fold,
    so every fold's class count is within one of the proportional share.
    """
    labels = np.asarray(labels)
    if len(labels) != n:
        raise ValueError("labels length must be n")
    classes, counts = np.unique(labels, return_counts=True)
    if k < 2:
        raise ValueError("k must be >= 2")
    if k > counts.min():
        raise StratificationError(
            f"k={k} exceeds the minority class count {int(counts.min())}"
        )
    all_repeats = []
    for r in range(repeats):
        rng = np.random.default_rng(np.random.SeedSequence(entropy=[int(seed), r]))
        folds = [[] for _ in range(k)]
        for cls in classes:
            cls_idx = np.flatnonzero(labels == cls)
            rng.shuffle(cls_idx)
            start = int(rng.integers(k))
            for i, sample in enumerate(cls_idx):
                folds[(start + i) % k].append(int(sample))
        all_repeats.append([np.array(sorted(f), dtype=np.int64) for f in folds])
    return all_repeats


@dataclass(frozen=True)
class ClassifierSpec:
    kind: str  # logit | tree | forest
    params: dict = field(default_factory=dict)


def fit_classifier(spec: ClassifierSpec, data: ml.Dataset, seed_parts=(0,)):
    if spec.kind == "logit":
        return ml.fit_logit(data, **spec.params)
    if spec.kind == "tree":
        return ml.fit_tree(data, **spec.params)
    if spec.kind == "forest":
        seed = int(np.random.SeedSequence(entropy=list(seed_parts)).generate_state(1)[0])
        return ml.fit_forest(data, seed=seed, **spec.params)
    raise ValueError(f"unknown classifier kind {spec.kind!r}")


@dataclass
class Cell:
    classifier: str
    repeat: int
    fold: int
    auc: float
    precision: float | None
    recall: float | None
    tp: int
    fp: int
    tn: int
    fn: int

    def as_dict(self):
        return {
            "classifier": self.classifier,
            "repeat": self.repeat,
            "fold": self.fold,
            "auc": self.auc,
            "precision": self.precision,
            "recall": self.recall,
            "tp": self.tp,
            "fp": self.fp,
            "tn": self.tn,
            "fn": self.fn,
        }


@dataclass
class EvalReport:
    cells: list[Cell]
    config: dict

    def classifiers(self):
        seen = []
        for cell in self.cells:
            if cell.classifier not in seen:
                seen.append(cell.classifier)
        return seen

    def aggregate(self):
        """Unweighted mean and sd over (repeat, fold) cells per classifier;
        NA precisions are skipped."""
        out = {}
        for name in self.classifiers():
            rows = [c for c in self.cells if c.classifier == name]
            aucs = [c.auc for c in rows]
            precisions = [c.precision for c in rows if c.precision is not None]
            recalls = [c.recall for c in rows if c.recall is not None]

            def _mean(xs):
                return float(np.mean(xs)) if xs else None

            def _sd(xs):
                return float(np.std(xs)) if len(xs) > 1 else 0.0

            out[name] = {
                "auc_mean": _mean(aucs),
                "auc_sd": _sd(aucs),
                "precision_mean": _mean(precisions),
                "precision_sd": _sd(precisions) if precisions else None,
                "recall_mean": _mean(recalls),
                "recall_sd": _sd(recalls) if recalls else None,
                "cells": len(rows),
                "na_precision_cells": sum(1 for c in rows if c.precision is None),
            }
        return out

    def as_dict(self):
        return {
            "config": self.config,
            "cells": [c.as_dict() for c in self.cells],
            "aggregate": self.aggregate(),
        }


def _cell_from_scores(name, repeat, fold, scores, truth) -> Cell:
    predictions = (np.asarray(scores) >= 0.5).astype(np.int8)
    tp, fp, tn, fn = confusion(predictions, truth)
    precision, recall = precision_recall(predictions, truth)
    return Cell(
        classifier=name,
        repeat=repeat,
        fold=fold,
        auc=roc_auc(scores, truth),
        precision=precision,
        recall=recall,
        tp=tp,
        fp=fp,
        tn=tn,
        fn=fn,
    )


def cross_validate(data: ml.Dataset, specs, folds, seed=0, config=None) -> EvalReport:
    """Repeated k-fold evaluation of every classifier spec.

    folds comes from stratified_kfold; each cell trains on k-1 folds and
    scores the held-out one.
    """
    cells = []
    for name, spec in specs.items():
        for r, fold_list in enumerate(folds):
            for f, test_idx in enumerate(fold_list):
                train_mask = np.ones(len(data.y), dtype=bool)
                train_mask[test_idx] = False
                train = ml.make_dataset(
                    data.X[train_mask],
                    data.y[train_mask],
                    data.columns,
                    [data.ids[i] for i in np.flatnonzero(train_mask)],
                )
                try:
                    model = fit_classifier(spec, train, seed_parts=(seed, r, f))
                except Exception as exc:
                    exc.args = (f"{exc} (repeat {r}, fold {f})",)
                    raise
                scores = ml.predict_proba(model, data.X[test_idx])
                cells.append(
                    _cell_from_scores(name, r, f, scores, data.y[test_idx])
                )
    return EvalReport(cells=cells, config=dict(config or {}))


@dataclass(frozen=True)
class BaselineSpec:
    kind: str  # allhired | email | officehours
    domains: tuple[str, ...] = ("mozilla.com",)
    threshold: float = 0.5

    def name(self) -> str:
        if self.kind == "officehours":
            return f"{int(round(self.threshold * 100))}%officehours"
        return self.kind


OFFICE_START, OFFICE_END = 9, 17  # weekday window of the office-hours rule


def _office_share(commits) -> float:
    hits = 0
    for c in commits:
        lt = to_local(c.timestamp_utc, c.tz_offset_minutes)
        if not lt.is_weekend and OFFICE_START <= lt.hour < OFFICE_END:
            hits += 1
    return hits / len(commits)


def _email_share(commits, domains) -> float:
    hits = sum(1 for c in commits if c.author_email.rsplit("@", 1)[-1] in domains)
    return hits / len(commits)


def baseline_predict(spec: BaselineSpec, commits_by_id, ids):
    """(scores, predictions) aligned with ids.

    allhired scores 1 everywhere; email scores the share of commits from a
    listed domain and predicts hired when at least one exists; officehours
    scores the weekday 9-17 share and thresholds it.
    """
    scores = np.zeros(len(ids))
    predictions = np.zeros(len(ids), dtype=np.int8)
    for i, ident_id in enumerate(ids):
        commits = commits_by_id[ident_id]
        if spec.kind == "allhired":
            scores[i] = 1.0
            predictions[i] = 1
        elif spec.kind == "email":
            share = _email_share(commits, set(spec.domains))
            scores[i] = share
            predictions[i] = 1 if share > 0 else 0
        elif spec.kind == "officehours":
            if not 0 < spec.threshold < 1:
                raise ValueError("officehours threshold must be in (0,1)")
            share = _office_share(commits)
            scores[i] = share
            predictions[i] = 1 if share >= spec.threshold else 0
        else:
            raise ValueError(f"unknown baseline kind {spec.kind!r}")
    return scores, predictions


def baseline_cell(spec: BaselineSpec, commits_by_id, ids, truth) -> Cell:
    """One full-dataset evaluation row for a baseline."""
    scores, predictions = baseline_predict(spec, commits_by_id, ids)
    tp, fp, tn, fn = confusion(predictions, truth)
    precision, recall = precision_recall(predictions, truth)
    return Cell(
        classifier=spec.name(),
        repeat=0,
        fold=0,
        auc=roc_auc(scores, truth),
        precision=precision,
        recall=recall,
        tp=tp,
        fp=fp,
        tn=tn,
        fn=fn,
    )


def default_baselines(domains=("mozilla.com",)):
    return [
        BaselineSpec(kind="allhired"),
        BaselineSpec(kind="email", domains=tuple(domains)),
        BaselineSpec(kind="officehours", threshold=0.05),
        BaselineSpec(kind="officehours", threshold=0.5),
        BaselineSpec(kind="officehours", threshold=0.95),
    ]


def _commit_office_flags(commits):
    out = np.zeros(len(commits), dtype=np.int8)
    for i, c in enumerate(commits):
        lt = to_local(c.timestamp_utc, c.tz_offset_minutes)
        out[i] = 1 if (not lt.is_weekend and OFFICE_START <= lt.hour < OFFICE_END) else 0
    return out


def per_commit_experiment(
    identities,
    commits_by_id,
    label_set,
    specs,
    coverage=0.5,
    domains=("mozilla.com",),
    seed=0,
    config=None,
):
    """Train on the most active developers' commits, test per commit.

    The training set is the smallest prefix of developers (by commit count
    descending, id ascending) whose commits reach `coverage` of the total.
    Returns (report over all commits, report over held-out developers'
    commits); both include the allpaid/email/officehours commit baselines.
    """
    labeled = []
    for ident in identities:
        status = lab.resolve_status(ident.id, commits_by_id[ident.id], label_set)
        if status is not None:
            labeled.append(ident)
    if not labeled:
        raise SingleClassError("no labeled developers")
    labeled.sort(key=lambda i: (-len(i.commit_shas), i.id))
    total = sum(len(i.commit_shas) for i in labeled)
    train_devs, cum = [], 0
    for ident in labeled:
        train_devs.append(ident)
        cum += len(ident.commit_shas)
        if cum >= coverage * total:
            break
    held_out = labeled[len(train_devs):]

    def build(devs):
        xs, ys, shas, commit_lists = [], [], [], []
        for ident in devs:
            commits = commits_by_id[ident.id]
            aggregates = feat.developer_features(commits)
            X, dev_shas, _ = feat.commit_features(commits, aggregates)
            statuses = lab.commit_labels(ident.id, commits, label_set)
            xs.append(X)
            ys.extend(1 if s == lab.HIRED else 0 for s in statuses)
            shas.extend(dev_shas)
            commit_lists.extend(sorted(commits, key=lambda c: (c.timestamp_utc, c.sha)))
        X = np.vstack(xs)
        return ml.make_dataset(X, ys, feat.COMMIT_FEATURE_COLUMNS, shas), commit_lists

    train_data, train_commits = build(train_devs)
    if len(np.unique(train_data.y)) < 2:
        raise SingleClassError("training developers carry a single class")
    all_data, all_commits = build(labeled)
    reports = []
    eval_sets = [("all", all_data, all_commits)]
    if held_out:
        rest_data, rest_commits = build(held_out)
        eval_sets.append(("least_active", rest_data, rest_commits))
    else:
        eval_sets.append(("least_active", None, None))

    models = {}
    for name, spec in specs.items():
        models[name] = fit_classifier(spec, train_data, seed_parts=(seed, 0, 0))

    for label, data, commits in eval_sets:
        cells = []
        if data is not None:
            for name in specs:
                scores = ml.predict_proba(models[name], data.X)
                cells.append(_cell_from_scores(name, 0, 0, scores, data.y))
            truth = data.y
            allpaid = np.ones(len(truth))
            cells.append(_cell_from_scores("allpaid", 0, 0, allpaid, truth))
            email_scores = np.array(
                [
                    1.0 if c.author_email.rsplit("@", 1)[-1] in set(domains) else 0.0
                    for c in commits
                ]
            )
            cells.append(_cell_from_scores("email", 0, 0, email_scores, truth))
            office_scores = _commit_office_flags(commits).astype(np.float64)
            cells.append(_cell_from_scores("officehours", 0, 0, office_scores, truth))
        reports.append(EvalReport(cells=cells, config=dict(config or {})))
    return reports[0], reports[1]
