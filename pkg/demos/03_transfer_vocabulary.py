"""Cold-start vocabulary transformation: rewriting unused parent slots with
child subwords while shared subwords keep their embedding rows.

Run:  python demos/03_transfer_vocabulary.py
"""

import tempfile
from pathlib import Path

import numpy as np

from xfervocab import Vocabulary, emit_transfer_bundle, map_vocabularies, transform_vocab

print("=" * 70)
print("1. The core assignment on a four-slot toy")
print("=" * 70)
parent = Vocabulary(["a", "b", "c", "d"])
child = Vocabulary(["b", "x", "a", "y"])
print(f"  parent: {parent.tokens}")
print(f"  child:  {child.tokens}")
for variant in ("frequency", "unmatched_random", "everything_random", "levenshtein"):
    mapping = map_vocabularies(parent, child, variant, seed=0)
    marks = ["*" if e.shared else " " for e in mapping.entries]
    print(f"  {variant:18} -> {mapping.output_tokens()}   shared slots: {marks}")

print()
print("  Every variant except everything_random pins shared tokens to their")
print("  parent slot, so their trained embeddings stay meaningful.")

print()
print("=" * 70)
print("2. End to end: learn the child vocabulary from a corpus, emit a bundle")
print("=" * 70)
parent = Vocabulary.with_ascii_fallback(["the_", "cat_", "ing", "tion_"])
words = [
    "the", "cat", "cats", "sat", "sitting", "mat", "matter", "nation", "station",
    "fish", "fishing", "sun", "sunny", "nap", "napping", "big", "bigger", "ate",
    "eating", "on", "in", "under", "over", "garden", "gardens", "window", "windows",
]
rng = np.random.default_rng(1)
child_corpus = [[" ".join(rng.choice(words, size=7)) for _ in range(400)]]
out_vocab, mapping = transform_vocab(parent, child_corpus, variant="frequency")
shared = sum(1 for e in mapping.entries if e.shared)
print(f"  parent size {len(parent)}, child vocabulary generated at the same size")
print(f"  shared slots: {shared}/{len(mapping.entries)}")

embeddings = np.random.default_rng(0).normal(size=(len(parent), 8)).astype(np.float32)
with tempfile.TemporaryDirectory() as tmp:
    bundle = emit_transfer_bundle(mapping, embeddings, Path(tmp) / "bundle")
    print(f"  bundle files: {[p.name for p in sorted(Path(tmp, 'bundle').iterdir())]}")
    unused = (Path(tmp) / "bundle" / "unused_parent.tsv").read_text().splitlines()
    print(f"  parent tokens never seen in the child corpus: {len(unused) - 1}")
print("  The embedding matrix is written unchanged: the remap is purely a")
print("  token-label rewrite, row i still belongs to slot i.")
