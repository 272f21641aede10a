"""Cold-start vocabulary transformation and transfer-bundle emission.

The transformation rewrites parent vocabulary slots with child subwords so
that a child model can reuse the parent's embedding table: subwords common
to both vocabularies keep their slot (and therefore their trained
embedding row); the remaining child subwords take over the unused slots
according to the selected assignment variant.  The embedding matrix itself
is never reordered; the remap is purely a token-label rewrite.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import EmbeddingShapeError
from .wordpiece import Vocabulary, VocabSpec, WordpieceLearner, apply_wordpiece

VARIANTS = ("frequency", "everything_random", "unmatched_random", "levenshtein")


@dataclass(frozen=True)
class MappingEntry:
    slot: int
    parent_token: str
    child_token: str
    shared: bool
    filled_from_parent: bool = False


@dataclass(frozen=True)
class VocabMapping:
    """Per-slot record of a parent-to-child vocabulary rewrite."""

    entries: tuple[MappingEntry, ...]
    variant: str
    seed: int | None = None
    used_parent_slots: frozenset[int] | None = None

    def to_tsv(self) -> str:
        lines = ["slot\tparent\tchild\tshared"]
        for e in self.entries:
            lines.append(f"{e.slot}\t{e.parent_token}\t{e.child_token}\t{str(e.shared).lower()}")
        return "\n".join(lines) + "\n"

    def output_tokens(self) -> list[str]:
        return [e.child_token for e in self.entries]


def _levenshtein_matrix(parent_tokens: Sequence[str], child_tokens: Sequence[str]) -> np.ndarray:
    """Pairwise edit distances, computed with a DP vectorized over all pairs."""
    n_p, n_c = len(parent_tokens), len(child_tokens)
    len_p = np.array([len(t) for t in parent_tokens], dtype=np.int64)
    len_c = np.array([len(t) for t in child_tokens], dtype=np.int64)
    max_p, max_c = int(len_p.max()), int(len_c.max())

    codes = {}

    def encode(tokens, width):
        arr = np.zeros((len(tokens), width), dtype=np.int32)
        for i, tok in enumerate(tokens):
            for j, ch in enumerate(tok):
                arr[i, j] = codes.setdefault(ch, len(codes) + 1)
        return arr

    enc_p = encode(parent_tokens, max_p)
    enc_c = encode(child_tokens, max_c)

    result = np.zeros((n_p, n_c), dtype=np.int64)
    # prev[j] holds dp row (i) for all pairs at once, shape (max_c + 1, n_p, n_c)
    prev = np.broadcast_to(np.arange(max_c + 1, dtype=np.int64)[:, None, None], (max_c + 1, n_p, n_c)).copy()
    cols = np.arange(n_c)
    done_rows = len_p == 0
    if done_rows.any():
        result[done_rows] = prev[len_c, :, cols].T[done_rows]
    for i in range(1, max_p + 1):
        cur = np.empty_like(prev)
        cur[0] = i
        chars_p = enc_p[:, i - 1][:, None]  # (n_p, 1)
        for j in range(1, max_c + 1):
            sub = prev[j - 1] + (chars_p != enc_c[:, j - 1][None, :])
            cur[j] = np.minimum(np.minimum(prev[j] + 1, cur[j - 1] + 1), sub)
        prev = cur
        at_end = len_p == i
        if at_end.any():
            result[at_end] = prev[len_c, :, cols].T[at_end]
    return result


def map_vocabularies(
    parent: Vocabulary,
    child: Vocabulary,
    variant: str = "frequency",
    seed: int | None = None,
) -> VocabMapping:
    """Assign child tokens to parent slots; see the module docstring.

    The child vocabulary should have at most as many tokens as the parent;
    if it has fewer, leftover slots keep their parent token and are flagged.
    Extra child tokens beyond the parent size are ignored in child order.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    if variant in ("everything_random", "unmatched_random") and seed is None:
        raise ValueError(f"variant {variant!r} is stochastic and requires a seed")
    parent_tokens = parent.tokens
    child_tokens = child.tokens[: len(parent_tokens)]
    parent_set = set(parent_tokens)
    child_set = set(child_tokens)
    n = len(parent_tokens)
    rng = random.Random(seed)

    assignment: list[str | None] = [None] * n

    if variant == "everything_random":
        shuffled = child_tokens[:]
        rng.shuffle(shuffled)
        for slot, token in enumerate(shuffled):
            assignment[slot] = token
    else:
        for slot, token in enumerate(parent_tokens):
            if token in child_set:
                assignment[slot] = token
        free_slots = [slot for slot in range(n) if assignment[slot] is None]
        remaining = [tok for tok in child_tokens if tok not in parent_set]

        if variant == "frequency":
            for slot, token in zip(free_slots, remaining):
                assignment[slot] = token
        elif variant == "unmatched_random":
            shuffled = remaining[:]
            rng.shuffle(shuffled)
            for slot, token in zip(free_slots, shuffled):
                assignment[slot] = token
        else:  # levenshtein
            if free_slots and remaining:
                free_parents = [parent_tokens[slot] for slot in free_slots]
                distances = _levenshtein_matrix(free_parents, remaining)
                slot_open = np.ones(len(free_slots), dtype=bool)
                child_open = np.ones(len(remaining), dtype=bool)
                open_count = min(len(free_slots), len(remaining))
                for dist in np.unique(distances):
                    hits = np.argwhere(
                        (distances == dist) & slot_open[:, None] & child_open[None, :]
                    )
                    for si, ci in hits:  # row-major: slot order, then child order
                        if slot_open[si] and child_open[ci]:
                            assignment[free_slots[si]] = remaining[ci]
                            slot_open[si] = False
                            child_open[ci] = False
                            open_count -= 1
                    if open_count == 0:
                        break

    entries = []
    for slot, token in enumerate(assignment):
        parent_token = parent_tokens[slot]
        if token is None:
            # Child vocabulary exhausted: keep the parent token, flagged.
            entries.append(MappingEntry(slot, parent_token, parent_token, False, True))
        else:
            entries.append(MappingEntry(slot, parent_token, token, token == parent_token))
    return VocabMapping(tuple(entries), variant, seed)


def transform_vocab(
    parent: Vocabulary,
    child_corpus: Sequence[Iterable[str]],
    variant: str = "frequency",
    seed: int | None = None,
    tolerance: float = 0.01,
) -> tuple[Vocabulary, VocabMapping]:
    """Learn a child vocabulary sized to the parent and remap parent slots.

    Also records which parent tokens ever occur in the child corpus under
    the parent segmentation, for the unused-parent report.
    """
    sentences = [list(part) for part in child_corpus]
    learner = WordpieceLearner.from_corpora(sentences)
    child = learner.learn(VocabSpec(target_size=len(parent), tolerance=tolerance))
    mapping = map_vocabularies(parent, child, variant, seed)

    observed: set[str] = set()
    for part in sentences:
        for sentence in part:
            observed.update(apply_wordpiece(parent, sentence))
    used = frozenset(e.slot for e in mapping.entries if e.parent_token in observed)
    mapping = VocabMapping(mapping.entries, mapping.variant, mapping.seed, used)
    out_tokens = mapping.output_tokens()
    return Vocabulary(out_tokens, within_tolerance=child.within_tolerance), mapping


@dataclass(frozen=True)
class TransferBundle:
    vocabulary_path: Path
    embeddings_path: Path
    mapping_path: Path
    unused_parent_path: Path


def save_embeddings_binary(matrix: np.ndarray, path: str | Path) -> None:
    """Little-endian float32 with an 8-byte header: row count, column count."""
    matrix = np.ascontiguousarray(matrix, dtype="<f4")
    rows, cols = matrix.shape
    with open(path, "wb") as fh:
        fh.write(np.array([rows, cols], dtype="<u4").tobytes())
        fh.write(matrix.tobytes())


def load_embeddings_binary(path: str | Path) -> np.ndarray:
    raw = Path(path).read_bytes()
    rows, cols = np.frombuffer(raw[:8], dtype="<u4")
    matrix = np.frombuffer(raw[8:], dtype="<f4")
    if matrix.size != int(rows) * int(cols):
        raise EmbeddingShapeError(f"{path}: payload does not match header {rows}x{cols}")
    return matrix.reshape(int(rows), int(cols)).copy()


def save_embeddings_tsv(matrix: np.ndarray, path: str | Path) -> None:
    matrix = np.asarray(matrix, dtype=np.float32)
    with open(path, "w", encoding="utf-8") as fh:
        for row in matrix:
            fh.write("\t".join(repr(float(x)) for x in row) + "\n")


def load_embeddings_tsv(path: str | Path) -> np.ndarray:
    rows = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        rows.append([float(x) for x in line.split("\t")])
    return np.array(rows, dtype=np.float32)


def load_embeddings(path: str | Path) -> np.ndarray:
    """Format chosen by extension: .tsv is text, anything else is binary."""
    if str(path).endswith(".tsv"):
        return load_embeddings_tsv(path)
    return load_embeddings_binary(path)


def emit_transfer_bundle(
    mapping: VocabMapping, parent_embeddings: np.ndarray, out_dir: str | Path
) -> TransferBundle:
    """Write the transformed vocabulary, the unchanged embedding matrix, the
    slot mapping TSV, and the unused-parent report."""
    parent_embeddings = np.asarray(parent_embeddings)
    if parent_embeddings.ndim != 2 or parent_embeddings.shape[0] != len(mapping.entries):
        raise EmbeddingShapeError(
            f"embedding matrix has {parent_embeddings.shape[0] if parent_embeddings.ndim == 2 else 'malformed'} "
            f"rows but the mapping has {len(mapping.entries)} slots"
        )
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    vocab_path = out_dir / "vocabulary.txt"
    Vocabulary(mapping.output_tokens()).save(vocab_path)

    emb_path = out_dir / "embeddings.bin"
    save_embeddings_binary(parent_embeddings, emb_path)

    mapping_path = out_dir / "mapping.tsv"
    mapping_path.write_text(mapping.to_tsv(), encoding="utf-8")

    unused_path = out_dir / "unused_parent.tsv"
    lines = ["slot\tparent"]
    if mapping.used_parent_slots is not None:
        for entry in mapping.entries:
            if entry.slot not in mapping.used_parent_slots:
                lines.append(f"{entry.slot}\t{entry.parent_token}")
    unused_path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    return TransferBundle(vocab_path, emb_path, mapping_path, unused_path)
