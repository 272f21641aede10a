"""Vocabulary and segmentation diagnostics over corpora.

Read-only analytics: segmentation rate, vocabulary usage, per-language
overlap breakdown, and the impact of subword-length filtering.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .corpus import FilterReport, ParallelCorpus, filter_by_subword_length
from .wordpiece import Vocabulary, apply_wordpiece


def segmentation_rate(vocab: Vocabulary, sentences: Iterable[str]) -> float:
    """Average wordpiece tokens per whitespace word over the corpus."""
    tokens = 0
    words = 0
    for sentence in sentences:
        tokens += len(apply_wordpiece(vocab, sentence))
        words += len(sentence.split())
    if words == 0:
        raise ValueError("cannot compute a segmentation rate over an empty corpus")
    return tokens / words


def unicode_range_predicate(ranges: Sequence[tuple[int, int]]) -> Callable[[str], bool]:
    """Token predicate: has at least one character inside the inclusive
    code-point ranges (e.g. [(0x0400, 0x04FF)] for Cyrillic)."""

    def predicate(token: str) -> bool:
        for ch in token:
            code = ord(ch)
            for lo, hi in ranges:
                if lo <= code <= hi:
                    return True
        return False

    return predicate


def vocab_usage(
    vocab: Vocabulary,
    sentences: Iterable[str],
    token_filter: Callable[[str], bool] | None = None,
) -> float:
    """Fraction of (optionally filtered) vocabulary tokens observed at least
    once in the segmented corpus."""
    considered = [tok for tok in vocab if token_filter is None or token_filter(tok)]
    if not considered:
        return 0.0
    wanted = set(considered)
    observed: set[str] = set()
    for sentence in sentences:
        for token in apply_wordpiece(vocab, sentence):
            if token in wanted:
                observed.add(token)
        if len(observed) == len(wanted):
            break
    return len(observed) / len(considered)


@dataclass(frozen=True)
class OverlapBreakdown:
    """Vocabulary tokens classed by the exact set of languages using them.

    A token belongs to a language when its count in that language's
    segmented corpus reaches min_count; tokens below the threshold
    everywhere are counted as never_observed.
    """

    classes: dict[frozenset[str], int]
    reused_parent: int | None
    unused_by_child: int | None
    min_count: int
    never_observed: int
    vocabulary_size: int
    languages: tuple[str, ...] = field(default=())

    def to_tsv(self) -> str:
        lines = ["languages\ttokens\tpercent"]
        total = self.vocabulary_size
        for subset in sorted(self.classes, key=lambda s: (len(s), sorted(s))):
            langs = "+".join(sorted(subset))
            count = self.classes[subset]
            lines.append(f"{langs}\t{count}\t{100.0 * count / total:.2f}")
        lines.append(f"never_observed\t{self.never_observed}\t{100.0 * self.never_observed / total:.2f}")
        if self.reused_parent is not None:
            lines.append(f"reused_parent\t{self.reused_parent}\t{100.0 * self.reused_parent / total:.2f}")
        if self.unused_by_child is not None:
            lines.append(f"unused_by_child\t{self.unused_by_child}\t{100.0 * self.unused_by_child / total:.2f}")
        return "\n".join(lines) + "\n"


def overlap_breakdown(
    vocab: Vocabulary,
    corpora: Mapping[str, Iterable[str]],
    min_count: int = 10,
    parent_langs: Sequence[str] = (),
    child_langs: Sequence[str] = (),
) -> OverlapBreakdown:
    """Break the vocabulary into classes keyed by the exact language subset
    using each token.

    reused_parent counts tokens observed in at least one parent language and
    at least one child language (the parent knowledge the child benefits
    from); unused_by_child counts tokens observed somewhere but in no child
    language.  Both are None when the respective role list is empty.
    """
    if len(corpora) < 2:
        raise ValueError("overlap breakdown needs at least two labeled corpora")
    for lang in list(parent_langs) + list(child_langs):
        if lang not in corpora:
            raise ValueError(f"role language {lang!r} has no labeled corpus")

    token_langs: dict[str, set[str]] = {}
    for lang, sentences in corpora.items():
        counts: Counter = Counter()
        for sentence in sentences:
            counts.update(apply_wordpiece(vocab, sentence))
        for token in vocab:
            if counts[token] >= min_count:
                token_langs.setdefault(token, set()).add(lang)

    classes: dict[frozenset[str], int] = {}
    for langs in token_langs.values():
        key = frozenset(langs)
        classes[key] = classes.get(key, 0) + 1

    parent_set, child_set = set(parent_langs), set(child_langs)
    reused = None
    if parent_set and child_set:
        reused = sum(
            count for subset, count in classes.items() if subset & parent_set and subset & child_set
        )
    unused = None
    if child_set:
        unused = sum(count for subset, count in classes.items() if not subset & child_set)

    return OverlapBreakdown(
        classes=classes,
        reused_parent=reused,
        unused_by_child=unused,
        min_count=min_count,
        never_observed=len(vocab) - len(token_langs),
        vocabulary_size=len(vocab),
        languages=tuple(corpora),
    )


def length_filter_impact(vocab: Vocabulary, corpus: ParallelCorpus, threshold: int) -> FilterReport:
    """How much of the corpus a subword-length filter would remove."""
    _, report = filter_by_subword_length(corpus, vocab, threshold)
    return report
