"""A tour of the two subword segmenters and the substring enumerator.

Run:  python demos/01_segmentation_tour.py
"""

from xfervocab import (
    Vocabulary,
    apply_bpe,
    apply_wordpiece,
    detokenize,
    enumerate_substrings,
    learn_bpe,
)

print("=" * 70)
print("1. BPE: learn merges from three words, apply them")
print("=" * 70)

table = learn_bpe([["old older wider"]], num_merges=5)
for rule in table:
    print(f"  {rule.left} + {rule.right} -> {rule.left}{rule.right}")

for word in ("older", "old", "wider", "boulder"):
    print(f"  {word!r:10} -> {' '.join(apply_bpe(table, word))}")

print()
print("=" * 70)
print("2. Wordpiece: greedy longest match with an end-of-word underscore")
print("=" * 70)

czech = Vocabulary.with_ascii_fallback(["bude", "doma_", "end", "me_", "ví", "vík"])
english = Vocabulary.with_ascii_fallback(["bud", "dom", "end", "ho", "me", "week_", "will"])
sentence = "O víkendu budeme doma."

for name, vocab in (("own-language vocab", czech), ("foreign vocab", english)):
    tokens = apply_wordpiece(vocab, sentence)
    print(f"  {name:20} {' '.join(tokens)}")
    assert detokenize(tokens) == sentence

print()
print("  The foreign vocabulary has no 'í', so the character is escaped as")
print("  backslash + decimal code point + semicolon and the sentence still")
print("  decodes exactly. Any Unicode text is representable this way:")
tricky = "naïve snow☃man _underscored_ back\\slash"
vocab = Vocabulary.with_ascii_fallback([])
roundtrip = detokenize(apply_wordpiece(vocab, tricky))
print(f"  {tricky!r} -> roundtrip exact: {roundtrip == tricky}")

print()
print("=" * 70)
print("3. Substring enumeration with boundary markers")
print("=" * 70)
print(f"  cat -> {sorted(enumerate_substrings('cat'), key=lambda s: (len(s), s))}")
