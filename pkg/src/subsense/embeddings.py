"""Static embeddings over the sense-suffixed corpus.

A self-contained CBOW / skip-gram trainer with negative sampling, plus
the query surface used downstream: cosine, nearest neighbors, context
vectors and per-word sense selection. Plain and sense-suffixed tokens
("bass", "bass@2") live in one space; the trainer treats tokens as
opaque strings, the query side parses the "@k" suffix when it needs to
group senses of a surface.
"""

from __future__ import annotations

import threading
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .tagging import escape_surface, parse_token


class TrainError(RuntimeError):
    pass


class OovError(KeyError):
    pass


@dataclass
class EmbeddingConfig:
    dim: int = 100
    window: int = 5
    mode: str = "cbow"  # "cbow" or "skipgram"
    negatives: int = 5
    epochs: int = 5
    learning_rate: float = 0.025
    min_learning_rate: float = 1e-4
    subsample: float = 1e-3
    min_count: int = 5
    seed: int = 0
    workers: int = 1  # >1 trades bit-reproducibility for wall time

    def validate(self) -> None:
        if self.dim < 1 or self.window < 1 or self.negatives < 1 or self.epochs < 1:
            raise ValueError("dim, window, negatives and epochs must all be >= 1")
        if self.mode not in ("cbow", "skipgram"):
            raise ValueError(f"unknown mode {self.mode!r}")


def _sigmoid(x: np.ndarray | float) -> np.ndarray | float:
    return 1.0 / (1.0 + np.exp(-np.clip(x, -60.0, 60.0)))


def negative_sampling_loss(
    u: np.ndarray, v_pos: np.ndarray, v_negs: np.ndarray
) -> tuple[float, np.ndarray, np.ndarray, np.ndarray]:
    """Loss and analytic gradients for one (input, output, negatives) triple.

    loss = softplus(-u.v) + sum_i softplus(u.n_i), i.e. the negative
    log-likelihood of the positive pair against the sampled negatives.
    Returns (loss, d/du, d/dv_pos, d/dv_negs); dtype follows the inputs,
    so float64 inputs give float64 gradients for high-precision checks.
    """
    u = np.asarray(u)
    v_pos = np.asarray(v_pos)
    v_negs = np.asarray(v_negs).reshape(-1, u.shape[0])
    pos_dot = float(u @ v_pos)
    neg_dots = v_negs @ u
    loss = float(np.logaddexp(0.0, -pos_dot) + np.logaddexp(0.0, neg_dots).sum())
    g_pos = _sigmoid(pos_dot) - 1.0
    g_negs = _sigmoid(neg_dots)
    du = g_pos * v_pos + g_negs @ v_negs
    dv_pos = g_pos * u
    dv_negs = np.outer(g_negs, u)
    return loss, du, dv_pos, dv_negs


# --------------------------------------------------------------------------
# Training


class _TrainState:
    def __init__(self, tokens: list[str], counts: np.ndarray, config: EmbeddingConfig):
        rng = np.random.default_rng(config.seed)
        vsize = len(tokens)
        self.tokens = tokens
        self.index = {t: i for i, t in enumerate(tokens)}
        self.w_in = ((rng.random((vsize, config.dim)) - 0.5) / config.dim).astype(np.float32)
        self.w_out = np.zeros((vsize, config.dim), dtype=np.float32)
        total = counts.sum()
        if config.subsample > 0:
            freq = counts / total
            self.keep_prob = np.minimum(
                1.0, np.sqrt(config.subsample / freq) + config.subsample / freq
            )
        else:
            self.keep_prob = np.ones(vsize)
        noise = counts.astype(np.float64) ** 0.75
        self.neg_cum = np.cumsum(noise / noise.sum())
        self.train_words = int(total)
        self.processed = 0


def _sgd_pass(
    sentences: Sequence[list[int]],
    state: _TrainState,
    config: EmbeddingConfig,
    rng: np.random.Generator,
    total_planned: int,
) -> tuple[float, int]:
    """One pass over ``sentences``; returns (summed loss, pair count)."""
    w_in, w_out = state.w_in, state.w_out
    keep_prob, neg_cum = state.keep_prob, state.neg_cum
    negatives, window, cbow = config.negatives, config.window, config.mode == "cbow"
    lr0, lr_min = config.learning_rate, config.min_learning_rate
    loss_sum = 0.0
    pairs = 0
    for sent in sentences:
        alpha = max(lr_min, lr0 * (1.0 - state.processed / total_planned))
        state.processed += len(sent)
        if len(sent) > 1:
            kept = [w for w in sent if rng.random() < keep_prob[w]]
        else:
            kept = list(sent)
        n = len(kept)
        for pos in range(n):
            center = kept[pos]
            eff = int(rng.integers(1, window + 1))
            ctx = kept[max(0, pos - eff) : pos] + kept[pos + 1 : pos + eff + 1]
            if not ctx:
                continue
            if cbow:
                ctx_arr = np.array(ctx)
                l1 = w_in[ctx_arr].mean(axis=0)
                draws = np.searchsorted(state.neg_cum, rng.random(negatives), side="right")
                negs = np.unique(draws[draws != center])
                outs = np.concatenate(([center], negs))
                f = w_out[outs] @ l1
                sig = 1.0 / (1.0 + np.exp(-np.clip(f, -60, 60)))
                loss_sum += float(np.logaddexp(0.0, -f[0]) + np.logaddexp(0.0, f[1:]).sum())
                pairs += 1
                g = -sig * alpha
                g[0] += alpha
                neu1e = g @ w_out[outs]
                w_out[outs] += np.outer(g, l1)
                w_in[ctx_arr] += neu1e / len(ctx)
            else:
                l1 = w_in[center]
                for out_word in ctx:
                    draws = np.searchsorted(neg_cum, rng.random(negatives), side="right")
                    negs = np.unique(draws[draws != out_word])
                    outs = np.concatenate(([out_word], negs))
                    f = w_out[outs] @ l1
                    sig = 1.0 / (1.0 + np.exp(-np.clip(f, -60, 60)))
                    loss_sum += float(np.logaddexp(0.0, -f[0]) + np.logaddexp(0.0, f[1:]).sum())
                    pairs += 1
                    g = -sig * alpha
                    g[0] += alpha
                    neu1e = g @ w_out[outs]
                    w_out[outs] += np.outer(g, l1)
                    w_in[center] = l1 = l1 + neu1e
    return loss_sum, pairs


def train(corpus: Iterable[Sequence[str]], config: EmbeddingConfig | None = None) -> "EmbeddingMatrix":
    """Train embeddings over tokenized sentences.

    Single-worker mode consumes one RNG stream in corpus order and is
    bit-reproducible for a fixed seed. With workers > 1, threads shard
    the corpus and update shared weights without synchronization; the
    races are tolerated as stochastic noise and reproducibility is lost.
    """
    config = config or EmbeddingConfig()
    config.validate()
    sentences = [list(s) for s in corpus]
    counter: Counter[str] = Counter()
    for s in sentences:
        counter.update(s)
    items = sorted(
        ((t, c) for t, c in counter.items() if c >= config.min_count),
        key=lambda kv: (-kv[1], kv[0]),
    )
    if not items:
        raise TrainError(
            f"no token reaches min_count={config.min_count}; corpus too small or threshold too high"
        )
    tokens = [t for t, _ in items]
    counts = np.array([c for _, c in items], dtype=np.int64)
    state = _TrainState(tokens, counts, config)

    encoded = [
        [state.index[t] for t in s if t in state.index] for s in sentences
    ]
    encoded = [s for s in encoded if s]
    total_planned = max(1, state.train_words * config.epochs)

    epoch_losses: list[float] = []
    if config.workers <= 1:
        rng = np.random.default_rng(np.random.SeedSequence([config.seed, 7]))
        for _ in range(config.epochs):
            loss, pairs = _sgd_pass(encoded, state, config, rng, total_planned)
            epoch_losses.append(loss / max(1, pairs))
    else:
        for _ in range(config.epochs):
            results: list[tuple[float, int]] = [(0.0, 0)] * config.workers
            threads = []
            for wid in range(config.workers):
                shard = encoded[wid :: config.workers]
                wrng = np.random.default_rng(np.random.SeedSequence([config.seed, 7, wid]))

                def run(wid=wid, shard=shard, wrng=wrng):
                    results[wid] = _sgd_pass(shard, state, config, wrng, total_planned)

                threads.append(threading.Thread(target=run))
            for t in threads:
                t.start()
            for t in threads:
                t.join()
            loss = sum(r[0] for r in results)
            pairs = sum(r[1] for r in results)
            epoch_losses.append(loss / max(1, pairs))

    matrix = EmbeddingMatrix(tokens, state.w_in.copy())
    matrix.epoch_losses = epoch_losses
    return matrix


def train_file(path: str | Path, config: EmbeddingConfig | None = None) -> "EmbeddingMatrix":
    """Train from a text corpus: one sentence per line, space-separated."""
    with open(path, "r", encoding="utf-8") as fh:
        sentences = [line.split() for line in fh if line.strip()]
    return train(sentences, config)


# --------------------------------------------------------------------------
# Query surface


_VEC_MAGIC = b"SVEC1"


class EmbeddingMatrix:
    """Immutable token -> vector table with cosine-space queries."""

    def __init__(self, tokens: Sequence[str], vectors: np.ndarray):
        if len(tokens) != vectors.shape[0]:
            raise ValueError("token count does not match vector rows")
        if not np.isfinite(vectors).all():
            raise ValueError("non-finite vector entries")
        self.tokens: list[str] = list(tokens)
        self.vectors = np.asarray(vectors, dtype=np.float32)
        self._index = {t: i for i, t in enumerate(self.tokens)}
        if len(self._index) != len(self.tokens):
            raise ValueError("duplicate tokens")
        self.epoch_losses: list[float] = []
        self._unit: np.ndarray | None = None
        self._senses: dict[str, list[int]] | None = None

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token in self._index

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def vector(self, token: str) -> np.ndarray:
        idx = self._index.get(token)
        if idx is None:
            raise OovError(token)
        return self.vectors[idx]

    def _unit_rows(self) -> np.ndarray:
        if self._unit is None:
            norms = np.linalg.norm(self.vectors, axis=1, keepdims=True)
            norms[norms == 0] = 1.0
            self._unit = self.vectors / norms
        return self._unit

    def _sense_map(self) -> dict[str, list[int]]:
        """surface -> sorted sense ids present in the vocabulary."""
        if self._senses is None:
            senses: dict[str, list[int]] = {}
            for t in self.tokens:
                surface, sid = _surface_sense(t)
                if sid is not None:
                    senses.setdefault(surface, []).append(sid)
            for lst in senses.values():
                lst.sort()
            self._senses = senses
        return self._senses

    def cosine(self, t1: str, t2: str) -> float:
        return float(np.dot(self._unit_rows()[self._idx(t1)], self._unit_rows()[self._idx(t2)]))

    def _idx(self, token: str) -> int:
        idx = self._index.get(token)
        if idx is None:
            raise OovError(token)
        return idx

    def cosine_to_vector(self, token: str, vec: np.ndarray) -> float:
        norm = float(np.linalg.norm(vec))
        if norm == 0:
            return 0.0
        return float(self._unit_rows()[self._idx(token)] @ (vec / norm))

    def nearest_neighbors(
        self,
        token: str,
        k: int,
        tagged_only: bool = False,
        include_same_surface: bool = False,
    ) -> list[tuple[str, float]]:
        """Top-k tokens by cosine, excluding the query itself and (by
        default) other senses of the same surface."""
        idx = self._idx(token)
        if k <= 0:
            return []
        scores = self._unit_rows() @ self._unit_rows()[idx]
        surface, _ = _surface_sense(token)
        order = np.argsort(-scores, kind="stable")
        out: list[tuple[str, float]] = []
        for j in order:
            if j == idx:
                continue
            cand = self.tokens[int(j)]
            cand_surface, cand_sense = _surface_sense(cand)
            if tagged_only and cand_sense is None:
                continue
            if not include_same_surface and cand_surface == surface:
                continue
            out.append((cand, float(scores[j])))
            if len(out) == k:
                break
        return out

    def context_vector(self, tokens: Iterable[str], exclude: Iterable[str] = ()) -> np.ndarray:
        """Mean of the in-vocabulary context token vectors; excluded
        surfaces and OOV tokens are skipped."""
        skip = set(exclude)
        rows = [self._index[t] for t in tokens if t not in skip and t in self._index]
        if not rows:
            raise OovError("no in-vocabulary context tokens")
        return self.vectors[rows].mean(axis=0)

    def sense_tokens(self, word: str) -> list[str]:
        """The word's sense-suffixed vocabulary entries, ascending sense id."""
        esc = escape_surface(word)
        return [f"{esc}@{sid}" for sid in self._sense_map().get(word, [])]

    def select_sense(self, word: str, context_vec: np.ndarray) -> str:
        """The sense-suffixed token whose vector is closest (cosine) to the
        context vector; ties go to the lowest sense id."""
        candidates = self.sense_tokens(word)
        if not candidates:
            raise OovError(f"{word!r} has no sense-suffixed entries")
        best, best_score = candidates[0], -2.0
        for cand in candidates:
            score = self.cosine_to_vector(cand, context_vec)
            if score > best_score:
                best, best_score = cand, score
        return best

    # -- persistence --------------------------------------------------------

    def save_text(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"{len(self.tokens)} {self.dim}\n")
            for t, row in zip(self.tokens, self.vectors):
                floats = " ".join(_fmt_f32(x) for x in row)
                fh.write(f"{t} {floats}\n")

    def save_binary(self, path: str | Path) -> None:
        with open(path, "wb") as fh:
            fh.write(_VEC_MAGIC)
            fh.write(len(self.tokens).to_bytes(4, "little"))
            fh.write(self.dim.to_bytes(4, "little"))
            for t, row in zip(self.tokens, self.vectors):
                raw = t.encode("utf-8")
                fh.write(len(raw).to_bytes(4, "little"))
                fh.write(raw)
                fh.write(np.asarray(row, dtype="<f4").tobytes())

    @classmethod
    def load(cls, path: str | Path) -> "EmbeddingMatrix":
        path = Path(path)
        with open(path, "rb") as fh:
            magic = fh.read(5)
        if magic == _VEC_MAGIC:
            return cls._load_binary(path)
        return cls._load_text(path)

    @classmethod
    def _load_text(cls, path: Path) -> "EmbeddingMatrix":
        with open(path, "r", encoding="utf-8") as fh:
            header = fh.readline().split()
            vsize, dim = int(header[0]), int(header[1])
            tokens: list[str] = []
            vectors = np.empty((vsize, dim), dtype=np.float32)
            for i in range(vsize):
                parts = fh.readline().rstrip("\n").split(" ")
                tokens.append(parts[0])
                vectors[i] = np.array(parts[1:], dtype=np.float32)
        return cls(tokens, vectors)

    @classmethod
    def _load_binary(cls, path: Path) -> "EmbeddingMatrix":
        buf = path.read_bytes()
        vsize = int.from_bytes(buf[5:9], "little")
        dim = int.from_bytes(buf[9:13], "little")
        pos = 13
        tokens: list[str] = []
        vectors = np.empty((vsize, dim), dtype=np.float32)
        for i in range(vsize):
            tlen = int.from_bytes(buf[pos : pos + 4], "little")
            pos += 4
            tokens.append(buf[pos : pos + tlen].decode("utf-8"))
            pos += tlen
            vectors[i] = np.frombuffer(buf[pos : pos + 4 * dim], dtype="<f4")
            pos += 4 * dim
        return cls(tokens, vectors)


def _fmt_f32(x: np.float32) -> str:
    return np.format_float_positional(np.float32(x), unique=True, trim="-")


def _surface_sense(token: str) -> tuple[str, int | None]:
    """Lenient token split: corpora from the wild can contain tokens the
    tag grammar does not cover (raw emails, handles); treat those as plain."""
    try:
        return parse_token(token)
    except ValueError:
        return token, None
