"""Byte pair encoding: merge-table learning, application, and substring sets.

Learning counts word types weighted by corpus frequency and repeatedly
merges the most frequent adjacent symbol pair.  Ties are broken by the
higher current corpus frequency of the left symbol, then by lexicographic
pair order in which the bare end-of-word symbol sorts after every ordinary
symbol, so learning is deterministic.  Application replays the merges by
learned priority and renders continuation tokens with a trailing "@@".
"""

from __future__ import annotations

from collections import Counter, defaultdict
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple, Sequence

from .errors import CorpusFormatError

END_OF_WORD = "</w>"
MERGE_FILE_HEADER = "#version: xfervocab-1"


class MergeRule(NamedTuple):
    left: str
    right: str


class MergeTable:
    """Ordered BPE merge rules; order is both learning order and priority."""

    eow_marker = END_OF_WORD

    def __init__(self, rules: Sequence[MergeRule | tuple[str, str]]):
        cleaned = []
        seen = set()
        for rule in rules:
            rule = MergeRule(*rule)
            if not rule.left or not rule.right:
                raise ValueError(f"merge rule {rule} has an empty side")
            if rule in seen:
                raise ValueError(f"duplicate merge rule {rule}")
            seen.add(rule)
            cleaned.append(rule)
        self.rules = cleaned
        self._ranks = {rule: i for i, rule in enumerate(cleaned)}

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self) -> Iterator[MergeRule]:
        return iter(self.rules)

    def __eq__(self, other) -> bool:
        return isinstance(other, MergeTable) and self.rules == other.rules

    def save(self, path: str | Path) -> None:
        lines = [MERGE_FILE_HEADER]
        for left, right in self.rules:
            if " " in left or " " in right:
                raise ValueError(f"rule ({left!r}, {right!r}) contains a space")
            lines.append(f"{left} {right}")
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "MergeTable":
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        if not lines or lines[0] != MERGE_FILE_HEADER:
            raise CorpusFormatError(f"{path}: missing merge file header {MERGE_FILE_HEADER!r}")
        rules = []
        for i, line in enumerate(lines[1:], start=2):
            parts = line.split(" ")
            if len(parts) != 2:
                raise CorpusFormatError(f"{path}: line {i}: expected 'left right'")
            rules.append(MergeRule(parts[0], parts[1]))
        return cls(rules)


def _merge_word(symbols: list[str], left: str, right: str) -> list[str]:
    merged = left + right
    out = []
    i = 0
    n = len(symbols)
    while i < n:
        if i + 1 < n and symbols[i] == left and symbols[i + 1] == right:
            out.append(merged)
            i += 2
        else:
            out.append(symbols[i])
            i += 1
    return out


def _adjacent_pairs(symbols: list[str]) -> Counter:
    return Counter(zip(symbols, symbols[1:]))


def _symbol_key(symbol: str):
    return (1,) if symbol == END_OF_WORD else (0, symbol)


def _pair_key(pair: tuple[str, str]):
    return (_symbol_key(pair[0]), _symbol_key(pair[1]))


def learn_bpe(corpora: Sequence[Iterable[str]], num_merges: int) -> MergeTable:
    """Learn num_merges merge rules jointly over the given corpora.

    Pair counts are maintained incrementally: only words containing the
    merged pair are rewritten and their pair deltas applied.
    """
    if num_merges < 1:
        raise ValueError("num_merges must be at least 1")
    word_freqs: Counter = Counter()
    for sentences in corpora:
        for sentence in sentences:
            word_freqs.update(sentence.split())
    if not word_freqs:
        raise ValueError("cannot learn BPE from an empty corpus")

    words = []
    freqs = []
    for word, freq in sorted(word_freqs.items()):
        words.append(list(word) + [END_OF_WORD])
        freqs.append(freq)

    pair_counts: Counter = Counter()
    symbol_counts: Counter = Counter()
    occurrences: dict[tuple[str, str], set[int]] = defaultdict(set)
    for idx, (symbols, freq) in enumerate(zip(words, freqs)):
        for symbol in symbols:
            symbol_counts[symbol] += freq
        for pair, n in _adjacent_pairs(symbols).items():
            pair_counts[pair] += n * freq
            occurrences[pair].add(idx)

    rules = []
    used = set()
    for _ in range(num_merges):
        # A pair can re-emerge when a later merge rebuilds its left symbol;
        # it must not be recorded twice.
        candidates = [p for p in pair_counts if p not in used]
        if not candidates:
            break
        best = min(candidates, key=lambda p: (-pair_counts[p], -symbol_counts[p[0]], _pair_key(p)))
        used.add(best)
        left, right = best
        rules.append(MergeRule(left, right))
        merged = left + right
        for idx in sorted(occurrences[best]):
            old = words[idx]
            new = _merge_word(old, left, right)
            if new == old:
                continue
            freq = freqs[idx]
            k = (len(old) - len(new))  # number of merges performed in this word
            symbol_counts[left] -= k * freq
            symbol_counts[right] -= k * freq
            symbol_counts[merged] += k * freq
            old_pairs = _adjacent_pairs(old)
            new_pairs = _adjacent_pairs(new)
            for pair in old_pairs.keys() | new_pairs.keys():
                delta = new_pairs.get(pair, 0) - old_pairs.get(pair, 0)
                if delta:
                    pair_counts[pair] += delta * freq
                    if pair_counts[pair] <= 0:
                        del pair_counts[pair]
                if new_pairs.get(pair, 0):
                    occurrences[pair].add(idx)
                elif idx in occurrences[pair]:
                    occurrences[pair].discard(idx)
            words[idx] = new
        occurrences.pop(best, None)
        pair_counts.pop(best, None)
    return MergeTable(rules)


def apply_bpe(table: MergeTable, word: str) -> list[str]:
    """Segment one word with learned merges, rendered with "@@" markers."""
    if not word:
        raise ValueError("word must be non-empty")
    if any(c.isspace() for c in word):
        raise ValueError(f"word {word!r} contains whitespace")
    symbols = list(word) + [END_OF_WORD]
    ranks = table._ranks
    while len(symbols) > 1:
        best = None
        for pair in zip(symbols, symbols[1:]):
            rank = ranks.get(pair)
            if rank is not None and (best is None or rank < best[0]):
                best = (rank, pair)
        if best is None:
            break
        symbols = _merge_word(symbols, *best[1])
    if symbols[-1] == END_OF_WORD:
        symbols = symbols[:-1]
    elif symbols[-1].endswith(END_OF_WORD):
        symbols = symbols[:-1] + [symbols[-1][: -len(END_OF_WORD)]]
    return [s + "@@" for s in symbols[:-1]] + [symbols[-1]]


def segment_sentence(table: MergeTable, sentence: str) -> list[str]:
    """Apply BPE to every whitespace word of a sentence."""
    out = []
    for word in sentence.split():
        out.extend(apply_bpe(table, word))
    return out


def enumerate_substrings(word: str) -> set[str]:
    """All length >= 2 substrings of the word decorated with ^ and $ markers."""
    if not word:
        raise ValueError("word must be non-empty")
    if any(c.isspace() for c in word):
        raise ValueError(f"word {word!r} contains whitespace")
    decorated = "^" + word + "$"
    n = len(decorated)
    return {decorated[i:j] for i in range(n) for j in range(i + 2, n + 1)}
