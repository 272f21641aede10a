"""Wordpiece vocabularies: size-targeted learning, greedy segmentation, escapes.

Segmentation follows the greedy longest-match scheme with a trailing
underscore marking the end of every word-level unit.  Characters that have
no path through the vocabulary are escaped as a backslash, the decimal
digits of their code point, and a semicolon, each emitted as its own token,
so any Unicode text is representable.  The learner builds candidate units
greedily from observed word types, sweeps a minimum-frequency threshold
from high to low to rank them, and cuts the ranking at the requested
target, warning when the corpus cannot support a size within tolerance.
"""

from __future__ import annotations

import functools
import itertools
import re
import unicodedata
import warnings
from collections import Counter, defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .errors import EscapeDecodeError

# End-of-unit marker appended to every word-level unit before matching.
WORD_MARKER = "_"

# Tokens any segmentation-capable vocabulary must contain: these are the
# only characters an escape sequence can emit.
ESCAPE_TOKENS = ("\\", ";", "0", "1", "2", "3", "4", "5", "6", "7", "8", "9", WORD_MARKER)

_ESCAPE_RE = re.compile(r"\\(\d+);")


@functools.lru_cache(maxsize=None)
def _is_alnum(ch: str) -> bool:
    return unicodedata.category(ch)[0] in ("L", "N")


def pretokenize(text: str) -> list[str]:
    """Split text into maximal runs of letter/digit vs. other characters.

    A run that is exactly one space between two runs is dropped; decoding
    re-inserts it.  This keeps punctuation attached to no word, so a word
    like "doma." becomes the two units "doma" and ".".
    """
    if not text:
        return []
    units = []
    start = 0
    prev_alnum = _is_alnum(text[0])
    for pos in range(1, len(text)):
        cur_alnum = _is_alnum(text[pos])
        if cur_alnum != prev_alnum:
            unit = text[start:pos]
            if unit != " " or start == 0:
                units.append(unit)
            start = pos
            prev_alnum = cur_alnum
    units.append(text[start:])
    return units


def _escape_char(ch: str) -> list[str]:
    return ["\\", *str(ord(ch)), ";"]


def _unsafe_mask(unit: str) -> list[bool]:
    # Literal backslashes and underscores in the original text must be
    # escaped, otherwise they collide with the escape and marker syntax.
    # The appended marker itself (last position) is always safe.
    mask = [c in ("\\", WORD_MARKER) for c in unit]
    mask.append(False)
    return mask


class Vocabulary:
    """An ordered list of unique subword tokens; the index of a token is its
    identity (an embedding row in any model trained with this vocabulary).
    """

    def __init__(self, tokens: Sequence[str], within_tolerance: bool = True):
        tokens = list(tokens)
        seen = set()
        for tok in tokens:
            if not tok:
                raise ValueError("vocabulary tokens must be non-empty")
            if "\n" in tok:
                raise ValueError(f"token {tok!r} contains a newline")
            if tok in seen:
                raise ValueError(f"duplicate token {tok!r}")
            if WORD_MARKER in tok[:-1]:
                raise ValueError(f"token {tok!r} has a non-final marker underscore")
            if "\\" in tok and tok != "\\":
                raise ValueError(f"token {tok!r} embeds a backslash; only the bare escape token may")
            seen.add(tok)
        self._tokens = tokens
        self._index = {tok: i for i, tok in enumerate(tokens)}
        self._max_len = max((len(t) for t in tokens), default=0)
        self.within_tolerance = within_tolerance

    @classmethod
    def with_ascii_fallback(cls, tokens: Iterable[str]) -> "Vocabulary":
        """Build a toy vocabulary: the given tokens plus every printable
        ASCII character, both bare and marker-suffixed, plus escape tokens."""
        extra = list(tokens)
        closure = dict.fromkeys(extra)
        for code in range(32, 127):
            ch = chr(code)
            if ch in ("\\", WORD_MARKER):
                continue
            closure.setdefault(ch)
            closure.setdefault(ch + WORD_MARKER)
        for tok in ESCAPE_TOKENS:
            closure.setdefault(tok)
        return cls(list(closure))

    @classmethod
    def load(cls, path: str | Path) -> "Vocabulary":
        lines = Path(path).read_text(encoding="utf-8").split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        return cls(lines)

    def save(self, path: str | Path) -> None:
        Path(path).write_text("\n".join(self._tokens) + "\n", encoding="utf-8")

    @property
    def tokens(self) -> list[str]:
        return list(self._tokens)

    @property
    def max_token_length(self) -> int:
        return self._max_len

    def index(self, token: str) -> int:
        return self._index[token]

    def __contains__(self, token: str) -> bool:
        return token in self._index

    def __len__(self) -> int:
        return len(self._tokens)

    def __iter__(self) -> Iterator[str]:
        return iter(self._tokens)

    def __getitem__(self, i: int) -> str:
        return self._tokens[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, Vocabulary) and self._tokens == other._tokens

    def __repr__(self) -> str:
        return f"Vocabulary({len(self._tokens)} tokens)"


@dataclass(frozen=True)
class VocabSpec:
    """Target size and tolerances for vocabulary learning."""

    target_size: int
    tolerance: float = 0.01
    max_train_sentences: int = 20_000_000
    refine_iterations: int = 4

    def __post_init__(self):
        if not 0 < self.tolerance < 0.5:
            raise ValueError("tolerance must be in (0, 0.5)")
        if self.target_size < 1:
            raise ValueError("target_size must be positive")
        if self.refine_iterations < 1:
            raise ValueError("refine_iterations must be at least 1")


def _segment_unit(unit: str, index, max_len: int) -> list[str]:
    """Greedy longest-match over unit + marker; escapes unreachable chars.

    A token may also match word-finally without carrying the marker itself,
    in which case the marker fuses onto it ("me" matching at the end of
    "budeme_" emits "me_").
    """
    marked = unit + WORD_MARKER
    unsafe = _unsafe_mask(unit)
    n = len(marked)
    out = []
    i = 0
    while i < n:
        if unsafe[i]:
            out.extend(_escape_char(marked[i]))
            i += 1
            continue
        stop = i
        while stop < n and not unsafe[stop]:
            stop += 1
        limit = min(max_len + 1, stop - i)  # +1 allows marker fusion
        match = None
        for length in range(limit, 0, -1):
            cand = marked[i : i + length]
            if cand in index:
                match = cand
                break
            if i + length == n and length > 1 and cand[:-1] in index:
                match = cand  # final token absorbs the marker
                break
        if match is None:
            out.extend(_escape_char(marked[i]))
            i += 1
        else:
            out.append(match)
            i += len(match)
    return out


def apply_wordpiece(vocab: Vocabulary, sentence: str) -> list[str]:
    """Segment a sentence into wordpiece tokens under the given vocabulary."""
    for tok in ESCAPE_TOKENS:
        if tok not in vocab:
            raise ValueError(f"vocabulary lacks escape token {tok!r}; cannot segment arbitrary text")
    index = vocab._index
    max_len = vocab.max_token_length
    out = []
    for unit in pretokenize(sentence):
        out.extend(_segment_unit(unit, index, max_len))
    return out


def detokenize(tokens: Sequence[str]) -> str:
    """Exact inverse of apply_wordpiece for single-spaced input sentences."""
    text = "".join(tokens)
    if not text:
        return ""
    parts = text.split(WORD_MARKER)
    if parts[-1] == "":
        parts.pop()
    units = [_decode_escapes(part) for part in parts]
    pieces = []
    for i, unit in enumerate(units):
        if i > 0 and unit and units[i - 1] and _is_alnum(units[i - 1][0]) and _is_alnum(unit[0]):
            pieces.append(" ")
        pieces.append(unit)
    return "".join(pieces)


def _decode_escapes(text: str) -> str:
    out = []
    pos = 0
    while True:
        cut = text.find("\\", pos)
        if cut == -1:
            out.append(text[pos:])
            return "".join(out)
        out.append(text[pos:cut])
        m = _ESCAPE_RE.match(text, cut)
        if m is None:
            raise EscapeDecodeError(f"malformed escape at offset {cut} in {text!r}")
        out.append(chr(int(m.group(1))))
        pos = m.end()


def _count_units(corpora: Iterable[Iterable[str]], max_sentences: int) -> Counter:
    """Frequency of word-level units over the first max_sentences sentences."""
    counts: Counter = Counter()
    sentences = itertools.chain.from_iterable(corpora)
    for sentence in itertools.islice(sentences, max_sentences):
        counts.update(pretokenize(sentence))
    return counts


def _segment_boundaries(marked: str, unsafe: list[bool], index: set, max_len: int) -> list[tuple[int, int]]:
    """(start, end) spans of the greedy segmentation, escapes spanning one char."""
    n = len(marked)
    spans = []
    i = 0
    while i < n:
        if unsafe[i]:
            spans.append((i, i + 1))
            i += 1
            continue
        stop = i
        while stop < n and not unsafe[stop]:
            stop += 1
        limit = min(max_len + 1, stop - i)
        consumed = 1
        for length in range(limit, 0, -1):
            cand = marked[i : i + length]
            if cand in index or (i + length == n and length > 1 and cand[:-1] in index):
                consumed = length
                break
        spans.append((i, i + consumed))
        i += consumed
    return spans


class _CandidateBuilder:
    """Greedy candidate construction over word types, shared by the threshold
    search so repeated builds at different thresholds reuse the counts.

    Threshold 1 returns the raw substring inventory (every unit substring
    observed from character-level boundaries); higher thresholds refine the
    segmentation a few times and discount candidate counts by the longer
    candidates that contain them as prefixes.
    """

    def __init__(self, unit_counts: Counter, refine_iterations: int):
        self.unit_counts = unit_counts
        self.refine_iterations = refine_iterations
        chars = set()
        for unit in unit_counts:
            chars.update(unit)
        chars -= {"\\", WORD_MARKER}
        self.base = sorted(chars.union(ESCAPE_TOKENS))
        self._marked = [(u + WORD_MARKER, _unsafe_mask(u), f) for u, f in sorted(unit_counts.items())]
        self._cache: dict[int, list[tuple[str, int]]] = {}

    def _count_candidates(self, current: set, max_len: int) -> dict[str, int]:
        counts: dict[str, int] = defaultdict(int)
        for marked, unsafe, freq in self._marked:
            n = len(marked)
            for start, _end in _segment_boundaries(marked, unsafe, current, max_len):
                if unsafe[start]:
                    continue
                stop = start
                while stop < n and not unsafe[stop]:
                    stop += 1
                for end in range(start + 1, stop + 1):
                    counts[marked[start:end]] += freq
        return counts

    def build(self, min_count: int) -> list[tuple[str, int]]:
        """Token list (sorted by discounted count desc, then token).

        min_count 1 keeps the complete inventory in one pass; the discounted
        ranking still pushes substrings dominated by longer candidates to
        the tail, so trimming the list removes the least useful units first.
        """
        if min_count in self._cache:
            return self._cache[min_count]
        base_set = set(self.base)
        iterations = 1 if min_count <= 1 else self.refine_iterations
        current = set(base_set)
        max_len = 1
        counts: dict[str, int] = {}
        selected: dict[str, int] = {}
        for _ in range(iterations):
            counts = self._count_candidates(current, max_len)
            adjusted = dict(counts)
            selected = {}
            for cand in sorted(counts, key=lambda c: (-len(c), c)):
                count = adjusted[cand]
                if len(cand) < 2:
                    continue
                if count < min_count and min_count > 1:
                    continue
                selected[cand] = count
                for cut in range(1, len(cand)):
                    adjusted[cand[:cut]] -= count
            current = base_set | set(selected)
            max_len = max((len(t) for t in current), default=1)
        tokens = base_set | set(selected)
        result = [(tok, selected.get(tok, counts.get(tok, 0))) for tok in tokens]
        result.sort(key=lambda item: (-item[1], item[0]))
        self._cache[min_count] = result
        return result


class WordpieceLearner:
    """Reusable learner bound to one unit-frequency table.

    Candidate units survive at descending minimum-frequency thresholds; a
    unit is ranked by the highest threshold at which it first survives, then
    by its discounted count there.  The resulting ranking is the same for
    every target size, so vocabularies of different sizes cut from it are
    nested, and any target up to the inventory size is hit exactly.
    """

    def __init__(self, unit_counts: Counter, refine_iterations: int = 4):
        if not unit_counts:
            raise ValueError("cannot learn a vocabulary from an empty corpus")
        self._builder = _CandidateBuilder(unit_counts, refine_iterations)
        self._max_count = max(unit_counts.values())
        self._ranking: list[str] | None = None
        self._raw_counts: dict[str, int] | None = None

    @classmethod
    def from_corpora(
        cls,
        corpora: Sequence[Iterable[str]],
        max_train_sentences: int = 20_000_000,
        refine_iterations: int = 4,
    ) -> "WordpieceLearner":
        if not corpora:
            raise ValueError("cannot learn a vocabulary from an empty corpus")
        counts = _count_units(corpora, max_train_sentences)
        return cls(counts, refine_iterations)

    @property
    def base_tokens(self) -> list[str]:
        return list(self._builder.base)

    def _thresholds(self) -> list[int]:
        ladder = []
        level = self._max_count
        while level >= 2:
            ladder.append(level)
            level //= 2
        ladder.append(1)
        return ladder

    def _canonical_ranking(self) -> list[str]:
        if self._ranking is not None:
            return self._ranking
        seen = set(self._builder.base)
        ranked = []
        for threshold in self._thresholds():
            for tok, _count in self._builder.build(threshold):
                if tok not in seen:
                    seen.add(tok)
                    ranked.append(tok)
        self._ranking = ranked
        self._raw_counts = dict(self._builder.build(1))
        return ranked

    def learn(self, spec: VocabSpec) -> Vocabulary:
        ranking = self._canonical_ranking()
        base = self._builder.base
        target = spec.target_size
        if target < len(base):
            raise ValueError(f"target_size {target} is below the alphabet size {len(base)}")
        wanted = target - len(base)
        selected = ranking[:wanted]
        size = len(base) + len(selected)
        within = abs(size - target) <= spec.tolerance * target
        if not within:
            warnings.warn(
                f"vocabulary size {size} misses target {target} beyond tolerance "
                f"{spec.tolerance:.2%}; returning the closest achieved size",
                stacklevel=3,
            )
        raw = self._raw_counts or {}
        ordered = sorted(selected + base, key=lambda tok: (-raw.get(tok, 0), tok))
        return Vocabulary(ordered, within_tolerance=within)


def learn_wordpiece(corpora: Sequence[Iterable[str]], spec: VocabSpec) -> Vocabulary:
    """Learn a wordpiece vocabulary of roughly spec.target_size tokens.

    Multiple corpora are treated as one concatenated stream; counting stops
    after spec.max_train_sentences sentences.  The result always contains
    every observed character and the full escape alphabet, and its
    within_tolerance flag records whether the size contract was met.
    """
    learner = WordpieceLearner.from_corpora(
        corpora, spec.max_train_sentences, spec.refine_iterations
    )
    return learner.learn(spec)
