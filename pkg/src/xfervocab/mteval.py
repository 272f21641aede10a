"""MT evaluation statistics: corpus BLEU, paired bootstrap resampling,
the learning-curve stopping criterion, and output token analysis.

BLEU accumulates clipped n-gram matches at the document level and applies
the brevity penalty exp(1 - L_ref/L_sys) when the output is not longer
than the reference.  Scores are reported multiplied by 100.  The default
pipeline is mixed case, one reference, exponential smoothing, and an
international tokenization that pads punctuation not surrounded by digits.
"""

from __future__ import annotations

import math
import os
import unicodedata
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

TOKENIZATIONS = ("none", "intl")
SMOOTHINGS = ("none", "exponential")

_PUNCT_NORMALIZATION = {
    "‘": "'", "’": "'", "‚": "'", "“": '"', "”": '"',
    "„": '"', "«": '"', "»": '"', "–": "-", "—": "-",
    "−": "-", "…": "...", " ": " ",
}


def thread_cap() -> int:
    """Parallelism ceiling; XFERVOCAB_THREADS overrides the CPU count."""
    env = os.environ.get("XFERVOCAB_THREADS")
    if env is not None:
        try:
            return max(1, int(env))
        except ValueError:
            return 1
    return max(1, os.cpu_count() or 1)


def tokenize_intl(text: str) -> list[str]:
    """Normalize unicode punctuation to ASCII where defined, pad punctuation
    and symbols not sitting between digits with spaces, collapse whitespace."""
    text = "".join(_PUNCT_NORMALIZATION.get(ch, ch) for ch in text)
    out = []
    n = len(text)
    for i, ch in enumerate(text):
        category = unicodedata.category(ch)
        if category.startswith("P") or category.startswith("S"):
            prev_digit = i > 0 and text[i - 1].isdigit()
            next_digit = i + 1 < n and text[i + 1].isdigit()
            if category.startswith("S") or not (prev_digit and next_digit):
                out.append(f" {ch} ")
                continue
        out.append(ch)
    return "".join(out).split()


def _tokenize(text: str, tokenization: str) -> list[str]:
    if tokenization == "none":
        return text.split()
    if tokenization == "intl":
        return tokenize_intl(text)
    raise ValueError(f"unknown tokenization {tokenization!r}; expected one of {TOKENIZATIONS}")


@dataclass(frozen=True)
class BleuReport:
    score: float
    precisions: tuple[float, ...]
    weights: tuple[float, ...]
    bp: float
    sys_len: int
    ref_len: int
    smoothing: str
    tokenization: str
    n_max: int
    num_refs: int = 1

    def signature(self) -> str:
        return (
            f"BLEU+case.mixed+numrefs.{self.num_refs}+smooth.{self.smoothing}"
            f"+tok.{self.tokenization}+nmax.{self.n_max}+version.xfervocab-0.1.0"
        )

    def to_tsv(self) -> str:
        header = ["score", "bp", "sys_len", "ref_len"]
        header += [f"p{n}" for n in range(1, self.n_max + 1)]
        header += ["smoothing", "tokenization", "signature"]
        row = [f"{self.score:.6f}", f"{self.bp:.6f}", str(self.sys_len), str(self.ref_len)]
        row += [f"{p:.6f}" for p in self.precisions]
        row += [self.smoothing, self.tokenization, self.signature()]
        return "\t".join(header) + "\n" + "\t".join(row) + "\n"


@dataclass(frozen=True)
class SignificanceResult:
    wins_a: int
    wins_b: int
    ties: int
    samples: int
    better: str  # "A", "B", or "none"
    confidence_level: float

    def to_tsv(self) -> str:
        return (
            "wins_a\twins_b\tties\tsamples\tbetter\tconfidence_level\n"
            f"{self.wins_a}\t{self.wins_b}\t{self.ties}\t{self.samples}\t{self.better}\t"
            f"{self.confidence_level!r}\n"
        )


@dataclass(frozen=True)
class LearningCurve:
    points: tuple[tuple[int, float], ...]

    def __post_init__(self):
        steps = [step for step, _ in self.points]
        if any(b <= a for a, b in zip(steps, steps[1:])):
            raise ValueError("learning curve steps must be strictly increasing")

    def __len__(self) -> int:
        return len(self.points)

    @classmethod
    def from_tsv(cls, path: str | Path) -> "LearningCurve":
        points = []
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            columns = line.split("\t")
            if columns[0] == "step":  # header
                continue
            points.append((int(columns[0]), float(columns[1])))
        return cls(tuple(points))

    def to_tsv(self) -> str:
        lines = ["step\tscore"]
        lines += [f"{step}\t{score!r}" for step, score in self.points]
        return "\n".join(lines) + "\n"


def _normalize_references(references, n_sentences: int) -> list[list[str]]:
    refs = list(references)
    if refs and isinstance(refs[0], str):
        per_sentence = [[r] for r in refs]
    else:
        per_sentence = [list(rs) for rs in refs]
    if len(per_sentence) != n_sentences:
        raise ValueError(
            f"candidate count {n_sentences} does not match reference count {len(per_sentence)}"
        )
    return per_sentence


def _ngram_counts(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def sentence_stats(
    candidates: Sequence[str],
    references,
    n_max: int = 4,
    tokenization: str = "intl",
) -> np.ndarray:
    """Per-sentence sufficient statistics for corpus BLEU.

    Columns: matches_1..n, totals_1..n, sys_len, ref_len.  ref_len uses the
    reference closest in length to the candidate (ties prefer the shorter).
    """
    if len(candidates) == 0:
        raise ValueError("cannot score an empty corpus")
    refs = _normalize_references(references, len(candidates))
    stats = np.zeros((len(candidates), 2 * n_max + 2), dtype=np.int64)
    for i, (cand, ref_group) in enumerate(zip(candidates, refs)):
        cand_tokens = _tokenize(cand, tokenization)
        ref_tokens = [_tokenize(r, tokenization) for r in ref_group]
        sys_len = len(cand_tokens)
        ref_len = min((len(r) for r in ref_tokens), key=lambda L: (abs(L - sys_len), L))
        for n in range(1, n_max + 1):
            cand_ngrams = _ngram_counts(cand_tokens, n)
            matches = 0
            if cand_ngrams:
                clip: Counter = Counter()
                for r in ref_tokens:
                    for gram, count in _ngram_counts(r, n).items():
                        if count > clip[gram]:
                            clip[gram] = count
                matches = sum(min(count, clip[gram]) for gram, count in cand_ngrams.items())
            stats[i, n - 1] = matches
            stats[i, n_max + n - 1] = sum(cand_ngrams.values())
        stats[i, 2 * n_max] = sys_len
        stats[i, 2 * n_max + 1] = ref_len
    return stats


def _scores_from_sums(
    matches: np.ndarray,
    totals: np.ndarray,
    sys_len: np.ndarray,
    ref_len: np.ndarray,
    weights: np.ndarray,
    smoothing: str,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized document-level BLEU over rows of summed statistics.

    Returns (scores, precisions, bp); with exponential smoothing a zero
    match count at order n is replaced by 1/2^k, k counting the zero orders
    seen so far.
    """
    matches = np.asarray(matches, dtype=np.float64)
    totals = np.asarray(totals, dtype=np.float64)
    sys_len = np.asarray(sys_len, dtype=np.float64)
    ref_len = np.asarray(ref_len, dtype=np.float64)
    n_max = matches.shape[-1]

    effective = matches.copy()
    if smoothing == "exponential":
        inverse = np.ones_like(sys_len, dtype=np.float64)
        for n in range(n_max):
            zero = (matches[..., n] == 0) & (totals[..., n] > 0)
            inverse = np.where(zero, inverse * 2.0, inverse)
            effective[..., n] = np.where(zero, 1.0 / inverse, matches[..., n])
    elif smoothing != "none":
        raise ValueError(f"unknown smoothing {smoothing!r}; expected one of {SMOOTHINGS}")

    # An order with no n-grams at all (corpus shorter than n) is vacuous: it
    # contributes nothing to the geometric mean instead of zeroing the score.
    vacuous = totals == 0
    with np.errstate(divide="ignore", invalid="ignore"):
        precisions = np.where(vacuous, 0.0, effective / np.maximum(totals, 1))
        log_p = np.where(precisions > 0, np.log(np.maximum(precisions, 1e-300)), 0.0)
        geo = np.exp(np.sum(weights * log_p, axis=-1))
        bp = np.where(
            sys_len > ref_len,
            1.0,
            np.exp(1.0 - ref_len / np.maximum(sys_len, 1e-300)),
        )
    bp = np.where(sys_len == 0, 0.0, bp)
    dead = np.any((precisions == 0.0) & ~vacuous, axis=-1) | (sys_len == 0) | np.all(vacuous, axis=-1)
    scores = np.where(dead, 0.0, 100.0 * bp * geo)
    return scores, precisions, bp


def bleu(
    candidates: Sequence[str],
    references,
    n_max: int = 4,
    smoothing: str = "exponential",
    tokenization: str = "intl",
    weights: Sequence[float] | None = None,
) -> BleuReport:
    """Document-level BLEU (multiplied by 100) for one candidate corpus."""
    stats = sentence_stats(candidates, references, n_max, tokenization)
    sums = stats.sum(axis=0)
    if weights is None:
        weights = [1.0 / n_max] * n_max
    weights_arr = np.asarray(weights, dtype=np.float64)
    if weights_arr.shape != (n_max,):
        raise ValueError(f"expected {n_max} weights")
    scores, precisions, bp = _scores_from_sums(
        sums[None, :n_max],
        sums[None, n_max : 2 * n_max],
        sums[None, 2 * n_max],
        sums[None, 2 * n_max + 1],
        weights_arr,
        smoothing,
    )
    refs = list(references)
    num_refs = 1 if not refs or isinstance(refs[0], str) else max(len(r) for r in refs)
    return BleuReport(
        score=float(scores[0]),
        precisions=tuple(float(p) for p in precisions[0]),
        weights=tuple(float(w) for w in weights_arr),
        bp=float(bp[0]),
        sys_len=int(sums[2 * n_max]),
        ref_len=int(sums[2 * n_max + 1]),
        smoothing=smoothing,
        tokenization=tokenization,
        n_max=n_max,
        num_refs=num_refs,
    )


def paired_bootstrap(
    cand_a: Sequence[str],
    cand_b: Sequence[str],
    references,
    samples: int = 1000,
    alpha: float = 0.05,
    seed: int | None = None,
    n_max: int = 4,
    smoothing: str = "exponential",
    tokenization: str = "intl",
) -> SignificanceResult:
    """Paired bootstrap resampling: draw testsets with replacement, score
    both systems on each, and call a winner at the given confidence level.

    All resample indices derive from one seeded generator up front, so the
    result is independent of how the scoring work is chunked or threaded.
    """
    if len(cand_a) != len(cand_b):
        raise ValueError(f"system A has {len(cand_a)} sentences but system B has {len(cand_b)}")
    if samples < 1:
        raise ValueError("samples must be at least 1")
    stats_a = sentence_stats(cand_a, references, n_max, tokenization)
    stats_b = sentence_stats(cand_b, references, n_max, tokenization)
    n_sentences = stats_a.shape[0]
    weights = np.full(n_max, 1.0 / n_max)

    rng = np.random.default_rng(seed)
    indices = rng.integers(0, n_sentences, size=(samples, n_sentences))

    def score_chunk(chunk: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        sums_a = stats_a[chunk].sum(axis=1)
        sums_b = stats_b[chunk].sum(axis=1)
        out = []
        for sums in (sums_a, sums_b):
            scores, _, _ = _scores_from_sums(
                sums[:, :n_max],
                sums[:, n_max : 2 * n_max],
                sums[:, 2 * n_max],
                sums[:, 2 * n_max + 1],
                weights,
                smoothing,
            )
            out.append(scores)
        return out[0], out[1]

    cap = thread_cap()
    if cap > 1 and samples >= 64:
        chunks = np.array_split(indices, cap)
        with ThreadPoolExecutor(max_workers=cap) as pool:
            parts = list(pool.map(score_chunk, chunks))
        scores_a = np.concatenate([p[0] for p in parts])
        scores_b = np.concatenate([p[1] for p in parts])
    else:
        scores_a, scores_b = score_chunk(indices)

    wins_a = int(np.sum(scores_a > scores_b))
    wins_b = int(np.sum(scores_b > scores_a))
    ties = samples - wins_a - wins_b
    if wins_a / samples >= 1.0 - alpha:
        better = "A"
    elif wins_b / samples >= 1.0 - alpha:
        better = "B"
    else:
        better = "none"
    return SignificanceResult(wins_a, wins_b, ties, samples, better, alpha)


def should_stop(
    curve: LearningCurve | Sequence[tuple[int, float]],
    window_frac: float = 0.5,
    delta_frac: float = 0.005,
    min_evals: int = 4,
    relative_to: str = "global",
) -> tuple[bool, int]:
    """Stop when the best score inside the most recent window improves on the
    best outside it by no more than delta_frac of the maximal reached score.

    Returns (stop, best_step) where best_step is the step of the global
    maximum.  relative_to selects the delta denominator: "global" (the
    maximum anywhere) or "prewindow" (the maximum before the window).
    """
    points = list(curve.points if isinstance(curve, LearningCurve) else curve)
    if not points:
        raise ValueError("cannot evaluate an empty learning curve")
    if relative_to not in ("global", "prewindow"):
        raise ValueError("relative_to must be 'global' or 'prewindow'")
    scores = [score for _, score in points]
    best_index = max(range(len(scores)), key=lambda i: (scores[i], -i))
    best_step = points[best_index][0]

    t = len(points)
    window = math.ceil(window_frac * t)
    if t < min_evals or window >= t:
        return False, best_step
    inside = max(scores[t - window :])
    outside = max(scores[: t - window])
    denominator = max(scores) if relative_to == "global" else outside
    return inside - outside <= delta_frac * denominator, best_step


@dataclass(frozen=True)
class TokenOverlap:
    """Child output tokens classed by their confirmation source."""

    baseline_and_reference: int
    baseline_only: int
    reference_only: int
    neither: int

    @property
    def total(self) -> int:
        return self.baseline_and_reference + self.baseline_only + self.reference_only + self.neither

    def to_tsv(self) -> str:
        return (
            "baseline_and_reference\tbaseline_only\treference_only\tneither\ttotal\n"
            f"{self.baseline_and_reference}\t{self.baseline_only}\t{self.reference_only}\t"
            f"{self.neither}\t{self.total}\n"
        )


def token_overlap_analysis(
    child_out: Sequence[Sequence[str]],
    baseline_out: Sequence[Sequence[str]],
    reference: Sequence[Sequence[str]],
) -> TokenOverlap:
    """Classify every child output token by whether the baseline output and
    the reference confirm it, with per-sentence clipped multiset matching."""
    if not (len(child_out) == len(baseline_out) == len(reference)):
        raise ValueError(
            f"sentence counts differ: child {len(child_out)}, baseline {len(baseline_out)}, "
            f"reference {len(reference)}"
        )
    both = base_only = ref_only = neither = 0
    for child, base, ref in zip(child_out, baseline_out, reference):
        child_counts = Counter(child)
        base_counts = Counter(base)
        ref_counts = Counter(ref)
        for token, count in child_counts.items():
            in_base = min(count, base_counts[token])
            in_ref = min(count, ref_counts[token])
            overlap = min(in_base, in_ref)
            both += overlap
            base_only += in_base - overlap
            ref_only += in_ref - overlap
            neither += count - max(in_base, in_ref)
    return TokenOverlap(both, base_only, ref_only, neither)
