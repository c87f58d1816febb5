"""Topic clustering over character n-gram embeddings.

Embeddings are feature-hashed: every character n-gram of the lowercased,
boundary-wrapped text lands in one of d signed buckets via a seeded
polynomial rolling hash, and the bucket sums are L2-normalized. No trained
weights, bit-identical for a fixed seed. Clustering is spherical k-means
(cosine distance, centroids renormalized) with k-means++ seeding.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import TooFewPoints

_U64 = np.uint64
_HASH_BASE = _U64(0x100000001B3)                  # odd, so invertible mod 2^64
_HASH_BASE_INV = _U64(pow(0x100000001B3, -1, 2 ** 64))
_MIX_1 = _U64(0x9E3779B97F4A7C15)
_MIX_2 = _U64(0xC2B2AE3D27D4EB4F)

_WORD_RE = re.compile(r"[a-z0-9']+")


def word_tokens(text: str) -> list[str]:
    return _WORD_RE.findall(text.lower())


@dataclass(frozen=True)
class EmbedParams:
    dim: int = 128
    ngram_min: int = 3
    ngram_max: int = 5
    seed: int = 7


def _powers(base: _U64, n: int) -> np.ndarray:
    out = np.full(n, base, dtype=_U64)
    out[0] = _U64(1)
    return np.cumprod(out, dtype=_U64)


def _window_hashes(codes: np.ndarray, n: int,
                   pw: np.ndarray, pwinv: np.ndarray) -> np.ndarray:
    """Polynomial hash of every length-n window of a uint64 code array:
    H_i = sum_j codes[i+j] * BASE^(n-1-j) mod 2^64."""
    terms = codes * pwinv[:len(codes)]
    sums = np.cumsum(terms, dtype=_U64)
    windowed = sums[n - 1:].copy()
    windowed[1:] -= sums[:-n]
    return windowed * pw[n - 1:len(codes)]


def _bucket_sign(hashes: np.ndarray, dim: int, seed64: _U64) -> tuple[np.ndarray, np.ndarray]:
    m1 = (hashes ^ seed64) * _MIX_1
    m1 ^= m1 >> _U64(33)
    m2 = (hashes ^ seed64) * _MIX_2
    m2 ^= m2 >> _U64(29)
    buckets = (m1 % _U64(dim)).astype(np.int64)
    signs = np.where((m2 >> _U64(63)).astype(bool), -1.0, 1.0)
    return buckets, signs


def _codes(text: str) -> np.ndarray:
    wrapped = "<" + text.lower() + ">"
    raw = np.frombuffer(wrapped.encode("utf-32-le"), dtype=np.uint32)
    return raw.astype(_U64)


def embed_texts(texts: Sequence[str],
                params: Optional[EmbedParams] = None) -> tuple[np.ndarray, np.ndarray]:
    """Embed texts into unit vectors.

    Returns (vectors[n, dim], zero_mask): rows whose bucket sums cancelled
    to zero are mapped to the first basis vector and flagged in zero_mask.
    Texts shorter than ngram_min contribute their whole wrapped string as a
    single gram.
    """
    p = params or EmbedParams()
    seed64 = _U64((((p.seed & 0xFFFFFFFFFFFFFFFF) ^ int(_MIX_2)) * int(_MIX_1))
                  & 0xFFFFFFFFFFFFFFFF)
    n_texts = len(texts)
    vectors = np.zeros((n_texts, p.dim), dtype=np.float64)
    if n_texts == 0:
        return vectors, np.zeros(0, dtype=bool)

    normal_idx = [i for i, t in enumerate(texts) if len(t) >= p.ngram_min]
    short_idx = [i for i, t in enumerate(texts) if len(t) < p.ngram_min]

    if normal_idx:
        arrays = [_codes(texts[i]) for i in normal_idx]
        lengths = np.fromiter((len(a) for a in arrays), dtype=np.int64,
                              count=len(arrays))
        codes = np.concatenate(arrays)
        text_id = np.repeat(np.arange(len(normal_idx), dtype=np.int64), lengths)
        total = len(codes)
        pw = _powers(_HASH_BASE, total)
        pwinv = _powers(_HASH_BASE_INV, total)
        flat = np.zeros(len(normal_idx) * p.dim, dtype=np.float64)
        for n in range(p.ngram_min, p.ngram_max + 1):
            if total < n:
                continue
            hashes = _window_hashes(codes, n, pw, pwinv)
            valid = text_id[:total - n + 1] == text_id[n - 1:]
            buckets, signs = _bucket_sign(hashes[valid], p.dim, seed64)
            rows = text_id[:total - n + 1][valid]
            flat += np.bincount(rows * p.dim + buckets, weights=signs,
                                minlength=len(flat))
        vectors[normal_idx] = flat.reshape(len(normal_idx), p.dim)

    for i in short_idx:
        codes = _codes(texts[i])
        n = len(codes)
        pw = _powers(_HASH_BASE, n)
        pwinv = _powers(_HASH_BASE_INV, n)
        h = _window_hashes(codes, n, pw, pwinv)
        buckets, signs = _bucket_sign(h, p.dim, seed64)
        vectors[i, int(buckets[0])] += float(signs[0])

    norms = np.linalg.norm(vectors, axis=1)
    zero_mask = norms == 0.0
    vectors[zero_mask, 0] = 1.0
    norms[zero_mask] = 1.0
    vectors /= norms[:, None]
    return vectors, zero_mask


def embed_tweet(text: str, params: Optional[EmbedParams] = None) -> np.ndarray:
    vec, _ = embed_texts([text], params)
    return vec[0]


@dataclass
class TopicModel:
    k: int
    centroids: np.ndarray                  # (k, dim), unit rows
    assignments: np.ndarray                # (n,) cluster index
    objective_history: list[float] = field(default_factory=list)
    n_iters: int = 0
    converged: bool = False

    def cluster_sizes(self) -> np.ndarray:
        return np.bincount(self.assignments, minlength=self.k)


def _kmeanspp_seed(vectors: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = len(vectors)
    centers = np.empty((k, vectors.shape[1]), dtype=np.float64)
    first = int(rng.integers(n))
    centers[0] = vectors[first]
    # squared euclidean distance to the nearest chosen center; for unit
    # vectors that is 2 - 2*cos
    d2 = np.maximum(2.0 - 2.0 * (vectors @ centers[0]), 0.0)
    for j in range(1, k):
        total = float(d2.sum())
        if total <= 0.0:
            idx = int(rng.integers(n))
        else:
            idx = int(rng.choice(n, p=d2 / total))
        centers[j] = vectors[idx]
        d2 = np.minimum(d2, np.maximum(2.0 - 2.0 * (vectors @ centers[j]), 0.0))
    return centers


def cluster_topics(vectors: np.ndarray, k: int = 20, max_iters: int = 100,
                   seed: int = 7) -> TopicModel:
    """Spherical k-means. The objective sum(1 - cos(x, centroid)) is
    non-increasing across iterations; iteration stops when assignments are
    stable or max_iters is hit."""
    n = len(vectors)
    if n < k:
        raise TooFewPoints(f"{n} vectors for k={k}")
    rng = np.random.default_rng(seed)
    centroids = _kmeanspp_seed(vectors, k, rng)

    assignments = np.full(n, -1, dtype=np.int64)
    history: list[float] = []
    converged = False
    iters = 0
    for _ in range(max_iters):
        sims = vectors @ centroids.T
        new_assign = np.argmax(sims, axis=1)
        objective = float((1.0 - sims[np.arange(n), new_assign]).sum())
        history.append(objective)
        iters += 1
        if np.array_equal(new_assign, assignments):
            converged = True
            break
        assignments = new_assign
        for j in range(k):
            members = vectors[assignments == j]
            if len(members) == 0:
                continue              # empty cluster keeps its centroid
            mean = members.sum(axis=0)
            norm = np.linalg.norm(mean)
            if norm > 0:
                centroids[j] = mean / norm
    return TopicModel(k=k, centroids=centroids, assignments=assignments,
                      objective_history=history, n_iters=iters,
                      converged=converged)


def cluster_word_weights(texts: Sequence[str], assignments: np.ndarray,
                         k: int) -> dict[int, list[tuple[str, float]]]:
    """Per-cluster word TF-IDF (clusters as documents, smoothed idf),
    ranked weight-descending with lexicographic tiebreak."""
    tf: list[Counter] = [Counter() for _ in range(k)]
    for text, cluster in zip(texts, assignments):
        tf[int(cluster)].update(word_tokens(text))
    df: Counter = Counter()
    for counter in tf:
        df.update(counter.keys())
    out: dict[int, list[tuple[str, float]]] = {}
    for j in range(k):
        rows = [
            (word, count * (math.log((1 + k) / (1 + df[word])) + 1.0))
            for word, count in tf[j].items()
        ]
        rows.sort(key=lambda r: (-r[1], r[0]))
        out[j] = rows
    return out


def representative_tweets(model: TopicModel, texts: Sequence[str],
                          m: int = 10, top_words: int = 30,
                          ) -> tuple[dict[int, list[int]], dict[int, list[tuple[str, float]]]]:
    """Per-cluster representative text indices and word distributions.

    A text's score is the sum of its distinct words' cluster TF-IDF
    weights, normalized by its distinct-word count; top-m per cluster
    (index breaks ties). Cluster labels themselves are left to humans.
    """
    weights = cluster_word_weights(texts, model.assignments, model.k)
    weight_maps = [dict(weights[j]) for j in range(model.k)]
    scored: dict[int, list[tuple[float, int]]] = {j: [] for j in range(model.k)}
    for i, text in enumerate(texts):
        cluster = int(model.assignments[i])
        distinct = set(word_tokens(text))
        if distinct:
            wmap = weight_maps[cluster]
            score = sum(wmap.get(w, 0.0) for w in distinct) / len(distinct)
        else:
            score = 0.0
        scored[cluster].append((score, i))
    reps: dict[int, list[int]] = {}
    for j in range(model.k):
        ranked = sorted(scored[j], key=lambda s: (-s[0], s[1]))
        reps[j] = [i for _, i in ranked[:m]]
    dists = {j: weights[j][:top_words] for j in range(model.k)}
    return reps, dists
