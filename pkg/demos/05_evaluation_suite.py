"""Evaluation statistics: BLEU anatomy, significance testing, stopping rule.

Run:  python demos/05_evaluation_suite.py
"""

import random

from xfervocab import LearningCurve, bleu, paired_bootstrap, should_stop, token_overlap_analysis

print("=" * 70)
print("1. BLEU anatomy: clipping, precisions, brevity penalty")
print("=" * 70)
report = bleu(
    ["the the the the the the the"],
    ["the cat is on the mat"],
    smoothing="none",
    tokenization="none",
)
print(f"  degenerate candidate: p1 = {report.precisions[0]:.4f} (clipped to 2/7), score = {report.score:.2f}")

report = bleu(["the cat sat on the mat"], ["the cat sat on the mat"])
print(f"  perfect match: score = {report.score:.2f}, BP = {report.bp:.3f}")
print(f"  reported settings: {report.signature()}")

rng = random.Random(0)
words = "the cat dog sat mat ran green ideas sleep furiously".split()
refs = [" ".join(rng.choices(words, k=rng.randint(5, 12))) for _ in range(200)]
good = [" ".join(s.split()[:-1] + [rng.choice(words)]) for s in refs]
bad = [" ".join(rng.choices(words, k=len(s.split()))) for s in refs]
print(f"  near-copy system: {bleu(good, refs).score:.1f}   random system: {bleu(bad, refs).score:.1f}")

print()
print("=" * 70)
print("2. Paired bootstrap resampling (1000 samples, confidence 0.05)")
print("=" * 70)
result = paired_bootstrap(good, bad, refs, samples=1000, seed=3)
print(f"  wins A {result.wins_a}, wins B {result.wins_b}, ties {result.ties} -> better: {result.better}")
close = [" ".join(s.split()[:-1] + [rng.choice(words)]) for s in refs]
result = paired_bootstrap(good, close, refs, samples=1000, seed=3)
print(f"  two near-copies:  wins A {result.wins_a}, wins B {result.wins_b} -> better: {result.better}")

print()
print("=" * 70)
print("3. Stopping criterion over a learning curve")
print("=" * 70)
scores = [5.0, 11.0, 14.0, 15.5, 16.0, 16.01, 16.02, 16.03]
curve = LearningCurve(tuple((1000 * (i + 1), s) for i, s in enumerate(scores)))
for cut in range(4, len(scores) + 1):
    prefix = LearningCurve(curve.points[:cut])
    stop, best = should_stop(prefix)
    print(f"  after {cut} evaluations: stop={str(stop):5}  best step so far: {best}")

print()
print("=" * 70)
print("4. Where did the child's gain come from: token overlap classes")
print("=" * 70)
child = [s.split() for s in good]
baseline = [s.split() for s in bad]
reference = [s.split() for s in refs]
overlap = token_overlap_analysis(child, baseline, reference)
total = overlap.total
print(f"  baseline+reference {overlap.baseline_and_reference / total:6.1%}")
print(f"  baseline only      {overlap.baseline_only / total:6.1%}")
print(f"  reference only     {overlap.reference_only / total:6.1%}  <- the BLEU gain lives here")
print(f"  neither            {overlap.neither / total:6.1%}")
