"""Evaluation: structural metrics, classifiers, Kappa, AUC, and Bayes-error bounds."""
from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy.stats import rankdata

from .bayesnet import BayesianNetwork, forward_sample, true_mb
from .bayesnet.exact import exact_bayes_error  # noqa: F401  (re-exported oracle)
from .dataset import DiscreteDataset, make_folds
from .infotheory import conditional_entropy, joint_codes

LN2 = math.log(2.0)


# ---------------------------------------------------------------- structure

def precision_recall(found, truth) -> tuple[float, float]:
    found, truth = set(found), set(truth)
    hit = len(found & truth)
    if not found:
        precision = 1.0 if not truth else 0.0
    else:
        precision = hit / len(found)
    recall = hit / len(truth) if truth else 1.0
    return precision, recall


# --------------------------------------------------------------- classifiers

def _features(data: DiscreteDataset, features) -> list[int]:
    return data.feature_indices if features is None else [int(f) for f in features]


def majority_class(train: DiscreteDataset) -> int:
    return int(np.argmax(np.bincount(train.target, minlength=train.n_classes)))


def nbc_log_posterior(train: DiscreteDataset, test: DiscreteDataset, features=None,
                      smoothing: float = 1.0) -> np.ndarray:
    """Unnormalized log P(c) + Σ log P(f|c) for each test row, shape (m_test, K)."""
    K = train.n_classes
    feats = _features(train, features)
    y = train.target.astype(np.int64)
    prior = np.bincount(y, minlength=K).astype(float)
    with np.errstate(divide="ignore"):
        out = np.tile(np.log(prior / max(prior.sum(), 1.0)), (test.m, 1))
    for f in feats:
        r = train.cardinalities[f]
        counts = np.zeros((r, K))
        np.add.at(counts, (train.columns[f].astype(np.int64), y), 1.0)
        cond = (counts + smoothing) / (prior + smoothing * r)
        out += np.log(cond[test.columns[f].astype(np.int64)])
    return out


def nbc(train: DiscreteDataset, test: DiscreteDataset, features=None, smoothing: float = 1.0) -> np.ndarray:
    """Categorical naive Bayes with add-one smoothing; ties go to the lowest class code."""
    feats = _features(train, features)
    if not feats:
        return np.full(test.m, majority_class(train), dtype=np.int64)
    return np.argmax(nbc_log_posterior(train, test, feats, smoothing), axis=1)


def knn(train: DiscreteDataset, test: DiscreteDataset, k: int = 1, features=None,
        block: int = 256) -> np.ndarray:
    """k-nearest neighbours under Hamming distance over the selected features.

    Neighbours are ordered by distance, then by training-row index. A tied
    vote goes to the tied class whose first member comes earliest in that order.
    """
    feats = _features(train, features)
    if not feats:
        return np.full(test.m, majority_class(train), dtype=np.int64)
    if k < 1:
        raise ValueError("k must be >= 1")
    k = min(k, train.m)
    A = np.ascontiguousarray(train.columns[feats].T)
    B = np.ascontiguousarray(test.columns[feats].T)
    y = train.target.astype(np.int64)
    K = train.n_classes
    out = np.empty(test.m, dtype=np.int64)
    for start in range(0, test.m, block):
        chunk = B[start:start + block]
        dist = (chunk[:, None, :] != A[None, :, :]).sum(axis=2)
        order = np.argsort(dist, axis=1, kind="stable")[:, :k]
        labels = y[order]
        if k == 1:
            out[start:start + block] = labels[:, 0]
            continue
        for i, row in enumerate(labels):
            votes = np.bincount(row, minlength=K)
            tied = np.flatnonzero(votes == votes.max())
            if tied.size == 1:
                out[start + i] = tied[0]
            else:
                out[start + i] = next(c for c in row if c in tied)
    return out


def confusion_matrix(y_true, y_pred, K: int) -> np.ndarray:
    cm = np.zeros((K, K), dtype=np.int64)
    np.add.at(cm, (np.asarray(y_true, dtype=np.int64), np.asarray(y_pred, dtype=np.int64)), 1)
    return cm


def kappa(cm) -> float:
    """Cohen's kappa from a square confusion matrix."""
    cm = np.asarray(cm, dtype=float)
    if cm.ndim != 2 or cm.shape[0] != cm.shape[1]:
        raise ValueError("confusion matrix must be square")
    total = cm.sum()
    if total <= 0:
        raise ValueError("confusion matrix is empty")
    po = np.trace(cm) / total
    pe = float(np.dot(cm.sum(axis=0), cm.sum(axis=1))) / total ** 2
    if math.isclose(pe, 1.0):
        return 0.0
    return float((po - pe) / (1.0 - pe))


def auc_binary(scores, labels) -> float:
    """Mann–Whitney AUC: P(score of a positive > score of a negative), ties count ½."""
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels)
    pos = labels == 1
    n_pos, n_neg = int(pos.sum()), int((~pos).sum())
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC needs both classes present")
    ranks = rankdata(scores)
    return float((ranks[pos].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg))


# --------------------------------------------------------------- error bounds

class ErrorBounds(NamedTuple):
    lower: float
    upper: float | None

    @property
    def crossed(self) -> bool:
        """True when the reported lower bound exceeds the upper one."""
        return self.upper is not None and self.lower > self.upper


def _fano_lhs(p: float, K: int) -> float:
    h = 0.0
    if 0.0 < p < 1.0:
        h = -p * math.log(p) - (1.0 - p) * math.log(1.0 - p)
    return h + (p * math.log(K - 1) if K > 2 else 0.0)


def bayes_error_bounds(h_cs_nats: float, K: int, unit: str = "nats", tol: float = 1e-10) -> ErrorBounds:
    """Fano lower bound and the binary ½H upper bound on the Bayes error.

    ``h_cs_nats`` is H(C|S) in nats. The lower bound is the smallest
    P ∈ [0, 1 − 1/K] with H(P) + P ln(K − 1) ≥ H(C|S), found by bisection.
    The upper bound ½H(C|S) exists only for K = 2; ``unit`` selects whether
    H is taken in nats (as given) or converted to bits first.
    """
    if K < 2:
        raise ValueError("K must be >= 2")
    if h_cs_nats < 0:
        raise ValueError("conditional entropy must be nonnegative")
    if h_cs_nats > math.log(K) + 1e-9:
        raise ValueError(f"H(C|S) = {h_cs_nats} exceeds ln K = {math.log(K)}")
    if unit not in ("nats", "bits"):
        raise ValueError("unit must be 'nats' or 'bits'")
    if h_cs_nats == 0.0:
        lower = 0.0
    elif h_cs_nats >= math.log(K):
        # the Fano curve is flat at its maximum, so bisection only gets within ~sqrt(eps)
        lower = 1.0 - 1.0 / K
    else:
        lo, hi = 0.0, 1.0 - 1.0 / K
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if _fano_lhs(mid, K) >= h_cs_nats:
                hi = mid
            else:
                lo = mid
        lower = hi
    upper = None
    if K == 2:
        upper = 0.5 * h_cs_nats if unit == "nats" else 0.5 * h_cs_nats / LN2
    return ErrorBounds(lower, upper)


def conditional_log_likelihood(data: DiscreteDataset, s, smoothing: float = 1.0) -> float:
    """Mean log q(c_i | s_i) in nats, q fit on ``data`` with add-one smoothing."""
    K = data.n_classes
    y = data.target.astype(np.int64)
    s = [int(v) for v in s if v != data.class_index]
    if data.m == 0:
        return 0.0
    if s:
        codes, levels = joint_codes(data, s)
        codes = np.asarray(codes, dtype=np.int64)
    else:
        codes, levels = np.zeros(data.m, dtype=np.int64), 1
    counts = np.zeros((levels, K))
    np.add.at(counts, (codes, y), 1.0)
    q = (counts[codes, y] + smoothing) / (counts.sum(axis=1)[codes] + smoothing * K)
    return float(np.mean(np.log(q)))


# ------------------------------------------------------------------ pipeline

@dataclass
class EvaluationReport:
    precision: float | None
    recall: float | None
    accuracy_mean: float
    accuracy_std: float
    kappa_mean: float
    kappa_std: float
    auc_mean: float | None
    auc_std: float | None
    cond_entropy_bits: float
    bound_upper: float | None
    bound_lower: float
    runtime_seconds: float
    per_fold: list = field(default_factory=list)
    bound_crossed: bool = False
    config: dict = field(default_factory=dict)

    def to_dict(self, include_runtime: bool = True) -> dict:
        d = asdict(self)
        d["format"] = "unifsel/1"
        d["units"] = {"cond_entropy_bits": "bits", "bound_upper": "probability (from H in bits)",
                      "bound_lower": "probability"}
        if not include_runtime:
            d.pop("runtime_seconds")
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(**kw), indent=1, sort_keys=True)


def _mean_std(vals):
    vals = [v for v in vals if v is not None]
    if not vals:
        return None, None
    a = np.asarray(vals, dtype=float)
    return float(math.fsum(a) / a.size), float(a.std(ddof=1)) if a.size > 1 else 0.0


def evaluate_split(train: DiscreteDataset, test: DiscreteDataset, features, classifier: str = "knn",
                   k: int = 1) -> dict:
    """Fit on ``train`` restricted to ``features``, score on ``test``."""
    features = sorted(int(f) for f in features)
    if classifier == "knn":
        pred = knn(train, test, k, features)
        scores = None
    elif classifier == "nbc":
        if features:
            post = nbc_log_posterior(train, test, features)
            pred = np.argmax(post, axis=1)
            scores = post[:, 1] - post[:, 0] if train.n_classes == 2 else None
        else:
            pred, scores = nbc(train, test, features), None
    else:
        raise ValueError(f"unknown classifier {classifier!r}")
    cm = confusion_matrix(test.target, pred, train.n_classes)
    acc = float(np.trace(cm) / max(test.m, 1))
    auc = None
    if scores is not None and len(np.unique(test.target)) == 2:
        auc = auc_binary(scores, test.target)
    return {"accuracy": acc, "kappa": kappa(cm) if test.m else 0.0, "auc": auc,
            "confusion": cm.tolist()}


Selector = Callable[[DiscreteDataset], Sequence[int]]


def evaluate_pipeline(source, selector: Selector, classifier: str = "knn", k: int = 1,
                      seeds: Sequence[int] = (0,), train_size: int | None = None,
                      test_size: int | None = None, folds: int | None = None, target=None,
                      truth: str = "mb") -> EvaluationReport:
    """Run selection inside each split and aggregate classifier metrics.

    ``source`` is either a network (fresh train/test samples per seed: task
    streams 0 and 1) or a dataset (stratified ``folds``-fold CV per seed).
    Selection only sees training rows. Bounds come from the training split.
    """
    t0 = time.perf_counter()
    records = []
    for seed in seeds:
        if isinstance(source, BayesianNetwork):
            if train_size is None or test_size is None:
                raise ValueError("network sources need train_size and test_size")
            tr = forward_sample(source, train_size, seed, target, task=0)
            te = forward_sample(source, test_size, seed, target, task=1)
            splits = [(tr, te)]
        else:
            data = source if target is None else source.with_class(target)
            plan = make_folds(data, folds or 10, seed)
            splits = [tuple(data.take_rows(ix) for ix in plan.train_test(f)) for f in range(plan.k)]
        for fold, (tr, te) in enumerate(splits):
            feats = sorted(int(f) for f in selector(tr))
            rec = evaluate_split(tr, te, feats, classifier, k)
            rec.update(seed=int(seed), fold=fold, selected=feats)
            h = conditional_entropy(tr, tr.class_index, feats) if tr.m else 0.0
            rec["cond_entropy_nats"] = h
            if isinstance(source, BayesianNetwork):
                bl = true_mb(source, tr.class_index)
                want = bl.mb if truth == "mb" else bl.pc
                rec["precision"], rec["recall"] = precision_recall(feats, want)
            records.append(rec)
    acc_m, acc_s = _mean_std([r["accuracy"] for r in records])
    kap_m, kap_s = _mean_std([r["kappa"] for r in records])
    auc_m, auc_s = _mean_std([r["auc"] for r in records])
    h_nats = float(np.mean([r["cond_entropy_nats"] for r in records]))
    K = records[0]["confusion"].__len__()
    bounds = bayes_error_bounds(min(h_nats, math.log(K)), K, unit="bits")
    prec = _mean_std([r.get("precision") for r in records])[0]
    rec_ = _mean_std([r.get("recall") for r in records])[0]
    return EvaluationReport(prec, rec_, acc_m, acc_s, kap_m, kap_s, auc_m, auc_s, h_nats / LN2,
                            bounds.upper, bounds.lower, time.perf_counter() - t0, records,
                            bounds.crossed, {"classifier": classifier, "k": k, "seeds": list(seeds),
                                             "train_size": train_size, "test_size": test_size,
                                             "folds": folds})
