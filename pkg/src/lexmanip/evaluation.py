"""Alignment precision/recall/F1 and embedding-space similarity metrics."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exceptions import InvariantError


@dataclass(frozen=True)
class PRF:
    precision: float
    recall: float
    f1: float

    def to_dict(self) -> dict:
        return {"precision": self.precision, "recall": self.recall, "f1": self.f1}


def f1_score(precision: float, recall: float) -> float:
    """Harmonic mean of precision and recall (0 when both are 0)."""
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def alignment_prf(predicted: Sequence, gold: Sequence) -> PRF:
    """Micro-averaged precision, recall and F1 of predicted links against gold.

    An empty prediction has precision 1 only if the gold is empty too;
    likewise for recall with an empty gold.
    """
    if len(predicted) != len(gold):
        raise InvariantError(f"{len(predicted)} predicted vs {len(gold)} gold sentences")
    hits = n_pred = n_gold = 0
    for p, g in zip(predicted, gold):
        p, g = set(p), set(g)
        hits += len(p & g)
        n_pred += len(p)
        n_gold += len(g)
    precision = hits / n_pred if n_pred else float(n_gold == 0)
    recall = hits / n_gold if n_gold else float(n_pred == 0)
    return PRF(precision, recall, f1_score(precision, recall))


def cosine_similarity(u, v) -> float:
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape or u.ndim != 1:
        raise InvariantError(f"vectors must be 1-d with equal length, got {u.shape} and {v.shape}")
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0 or nv == 0:
        raise InvariantError("cosine similarity is undefined for a zero vector")
    return float(np.clip(np.dot(u / nu, v / nv), -1.0, 1.0))


@dataclass(frozen=True)
class EmbeddingPair:
    student_vector: np.ndarray
    teacher_vector: np.ndarray
    is_manipulation_pair: bool = True


def cosine_embedding_loss(pair: EmbeddingPair) -> float:
    """``1 - cos`` for a sentence and its manipulation, ``max(0, cos)`` otherwise."""
    cos = cosine_similarity(pair.student_vector, pair.teacher_vector)
    return 1.0 - cos if pair.is_manipulation_pair else max(0.0, cos)


def average_cosine_similarity(pairs: Sequence[EmbeddingPair]) -> float:
    if len(pairs) == 0:
        raise InvariantError("average cosine similarity of an empty set")
    cos = np.array([cosine_similarity(p.student_vector, p.teacher_vector) for p in pairs])
    # numpy reduces float64 arrays by pairwise summation
    return float(np.sum(cos) / len(cos))


def embedding_metrics(student: np.ndarray, teacher: np.ndarray, flags: Sequence[bool] | None = None) -> dict:
    """ACS and mean loss over row-aligned student/teacher matrices."""
    student = np.asarray(student, dtype=np.float64)
    teacher = np.asarray(teacher, dtype=np.float64)
    if student.shape != teacher.shape:
        raise InvariantError(f"student {student.shape} and teacher {teacher.shape} shapes differ")
    if flags is None:
        flags = [True] * len(student)
    if len(flags) != len(student):
        raise InvariantError(f"{len(flags)} pair flags for {len(student)} vectors")
    pairs = [EmbeddingPair(s, t, bool(f)) for s, t, f in zip(student, teacher, flags)]
    losses = np.array([cosine_embedding_loss(p) for p in pairs])
    return {"acs": average_cosine_similarity(pairs), "mean_loss": float(np.sum(losses) / len(losses)),
            "n": len(pairs)}
