"""Batch command-line driver.

Every subcommand reads declared inputs, writes declared outputs, and emits
a JSON run manifest recording the exact argument vector, the SHA-256 digest
of every input and output, the seed, and the tool version.  Re-running the
argv recorded in a manifest reproduces the artifacts byte for byte.

Exit codes: 0 success, 1 operation error, 2 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from . import __version__
from .bpe import MergeTable, learn_bpe, segment_sentence
from .corpus import (
    CORRUPTION_MODES,
    FilterReport,
    ParallelCorpus,
    corrupt_word_order,
    filter_by_subword_length,
    filter_by_word_length,
    load_parallel,
    load_parallel_tsv,
    make_pseudo_related,
    mix_with_oversample,
    sample_equal,
    subsample,
    write_parallel,
    write_parallel_tsv,
)
from .diagnostics import (
    length_filter_impact,
    overlap_breakdown,
    segmentation_rate,
    unicode_range_predicate,
    vocab_usage,
)
from .errors import XfervocabError
from .mteval import (
    LearningCurve,
    bleu,
    paired_bootstrap,
    should_stop,
    token_overlap_analysis,
)
from .sharedvocab import build_balanced_vocab, build_merged_vocab, merge_vocabs
from .transfer import (
    VARIANTS,
    emit_transfer_bundle,
    load_embeddings,
    map_vocabularies,
    transform_vocab,
)
from .wordpiece import Vocabulary, VocabSpec, apply_wordpiece, learn_wordpiece


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            digest.update(block)
    return "sha256:" + digest.hexdigest()


def _read_sentences(path: str) -> list[str]:
    lines = Path(path).read_text(encoding="utf-8").split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return lines


def _write_lines(path: str, lines) -> None:
    Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")


def _coerce(value: str):
    for converter in (int, float):
        try:
            return converter(value)
        except ValueError:
            continue
    return value


def _load_config(path: str) -> dict:
    """Simple key=value format; '#' starts a comment, keys use flag names.
    Values parse as int, then float, then plain string."""
    values: dict[str, object] = {}
    for i, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise XfervocabError(f"{path}: line {i}: expected key = value")
        key, value = line.split("=", 1)
        values[key.strip().replace("-", "_")] = _coerce(value.strip())
    return values


class _Manifest:
    """Collects inputs/outputs during a run; written as JSON at the end."""

    def __init__(self, argv: list[str]):
        self.argv = argv
        self.inputs: dict[str, str] = {}
        self.outputs: dict[str, str] = {}
        self.seed: int | None = None

    def add_input(self, path) -> None:
        if path:
            self.inputs[str(path)] = _sha256(Path(path))

    def add_output(self, path) -> None:
        if path:
            self.outputs[str(path)] = _sha256(Path(path))

    def write(self, path) -> None:
        payload = {
            "tool": "xfervocab",
            "version": __version__,
            "argv": self.argv,
            "seed": self.seed,
            "inputs": self.inputs,
            "outputs": self.outputs,
        }
        Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _corpus_in_args(parser, prefix="", required=True):
    group = parser.add_argument_group(f"{prefix or 'corpus'} input")
    p = f"--{prefix}-" if prefix else "--"
    group.add_argument(f"{p}source", help="source-side file, one sentence per line")
    group.add_argument(f"{p}target", help="target-side file, one sentence per line")
    group.add_argument(f"{p}tsv", help="two-column TSV instead of two files")


def _read_corpus(args, prefix="") -> ParallelCorpus:
    pre = f"{prefix}_" if prefix else ""
    tsv = getattr(args, f"{pre}tsv")
    source = getattr(args, f"{pre}source")
    target = getattr(args, f"{pre}target")
    if tsv:
        return load_parallel_tsv(tsv)
    if not source or not target:
        raise XfervocabError(
            f"missing corpus input: give --{prefix + '-' if prefix else ''}source/"
            f"--{prefix + '-' if prefix else ''}target or --{prefix + '-' if prefix else ''}tsv"
        )
    return load_parallel(source, target)


def _corpus_inputs_of(args, prefix="") -> list[str]:
    pre = f"{prefix}_" if prefix else ""
    if getattr(args, f"{pre}tsv"):
        return [getattr(args, f"{pre}tsv")]
    return [getattr(args, f"{pre}source"), getattr(args, f"{pre}target")]


def _corpus_out_args(parser):
    group = parser.add_argument_group("corpus output")
    group.add_argument("--out-source", help="output source-side file")
    group.add_argument("--out-target", help="output target-side file")
    group.add_argument("--out-tsv", help="output two-column TSV instead")


def _write_corpus(args, corpus: ParallelCorpus, manifest: _Manifest) -> None:
    if args.out_tsv:
        write_parallel_tsv(corpus, args.out_tsv)
        manifest.add_output(args.out_tsv)
    elif args.out_source and args.out_target:
        write_parallel(corpus, args.out_source, args.out_target)
        manifest.add_output(args.out_source)
        manifest.add_output(args.out_target)
    else:
        raise XfervocabError("missing corpus output: give --out-source/--out-target or --out-tsv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xfervocab",
        description="Deterministic subword-vocabulary engineering and MT evaluation toolkit.",
    )
    parser.add_argument("--config", help="key = value file providing flag defaults")
    parser.add_argument("--manifest", help="run manifest path (default: first output + .manifest.json)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("learn-bpe", help="learn a BPE merge table")
    p.add_argument("--input", nargs="+", required=True, help="training text files")
    p.add_argument("--merges", type=int, required=True)
    p.add_argument("--out", required=True, help="merge table file")

    p = sub.add_parser("apply-bpe", help="segment text with a merge table")
    p.add_argument("--table", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("learn-wp", help="learn a wordpiece vocabulary")
    p.add_argument("--input", nargs="+", required=True, help="training text files")
    p.add_argument("--target-size", type=int, required=True)
    p.add_argument("--tolerance", type=float, default=0.01)
    p.add_argument("--max-train-sentences", type=int, default=20_000_000)
    p.add_argument("--out", required=True, help="vocabulary file")

    p = sub.add_parser("apply-wp", help="segment text with a wordpiece vocabulary")
    p.add_argument("--vocab", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("transform-vocab", help="rewrite parent slots with child subwords")
    p.add_argument("--parent-vocab", required=True)
    p.add_argument("--child", nargs="*", default=[], help="child corpus text files")
    p.add_argument("--child-vocab", help="explicit child vocabulary instead of a corpus")
    p.add_argument("--variant", choices=VARIANTS, default="frequency")
    p.add_argument("--seed", type=int)
    p.add_argument("--embeddings", help="parent embedding matrix (.tsv or binary)")
    p.add_argument("--out-dir", required=True)

    p = sub.add_parser("merge-vocab", help="merged shared vocabulary")
    p.add_argument("--parent-vocab", help="merge two existing vocabulary files")
    p.add_argument("--child-vocab")
    _corpus_in_args(p, "parent")
    _corpus_in_args(p, "child")
    p.add_argument("--target-size", type=int, help="search per-side sizes for this merged size")
    p.add_argument("--tolerance", type=float, default=0.01)
    p.add_argument("--out", required=True)
    p.add_argument("--report", help="build report TSV")

    p = sub.add_parser("balanced-vocab", help="balanced shared vocabulary")
    _corpus_in_args(p, "parent")
    _corpus_in_args(p, "child")
    p.add_argument("--target-size", type=int, required=True)
    p.add_argument("--tolerance", type=float, default=0.01)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)

    diag = sub.add_parser("diag", help="vocabulary and corpus diagnostics").add_subparsers(
        dest="diag_command", required=True
    )
    p = diag.add_parser("rate", help="segmentation rate")
    p.add_argument("--vocab", required=True)
    p.add_argument("--input", nargs="+", required=True)
    p.add_argument("--out", help="TSV output")
    p = diag.add_parser("usage", help="fraction of vocabulary observed")
    p.add_argument("--vocab", required=True)
    p.add_argument("--input", nargs="+", required=True)
    p.add_argument(
        "--char-range",
        action="append",
        default=[],
        help="restrict to tokens with a char in an inclusive range, e.g. 0x0400-0x04FF",
    )
    p.add_argument("--out", help="TSV output")
    p = diag.add_parser("overlap", help="per-language vocabulary overlap breakdown")
    p.add_argument("--vocab", required=True)
    p.add_argument("--corpus", action="append", required=True, metavar="LANG=FILE")
    p.add_argument("--parent", action="append", default=[], help="parent-side language label")
    p.add_argument("--child", action="append", default=[], help="child-side language label")
    p.add_argument("--min-count", type=int, default=10)
    p.add_argument("--out", help="TSV output")
    p = diag.add_parser("filter-impact", help="share of pairs dropped by a subword-length filter")
    p.add_argument("--vocab", required=True)
    _corpus_in_args(p)
    p.add_argument("--threshold", type=int, default=100)
    p.add_argument("--out", help="TSV output")

    corpus = sub.add_parser("corpus", help="corpus operations").add_subparsers(
        dest="corpus_command", required=True
    )
    p = corpus.add_parser("filter", help="length filters")
    _corpus_in_args(p)
    _corpus_out_args(p)
    p.add_argument("--min-words", type=int, default=0)
    p.add_argument("--max-words", type=float, default=float("inf"))
    p.add_argument("--max-subwords", type=int, help="also filter by wordpiece length")
    p.add_argument("--vocab", help="vocabulary for --max-subwords")
    p.add_argument("--report", help="filter report TSV")
    p = corpus.add_parser("sample", help="equal sample from two corpora, or downscale one")
    _corpus_in_args(p, "a")
    _corpus_in_args(p, "b")
    _corpus_in_args(p)
    _corpus_out_args(p)
    p.add_argument("--per-side", type=int, help="pairs drawn from each of --a-*/--b-*")
    p.add_argument("--size", type=int, help="downscale the --source/--target corpus to this many pairs")
    p.add_argument("--seed", type=int, required=True)
    p = corpus.add_parser("mix", help="oversample authentic data into synthetic")
    _corpus_in_args(p, "authentic")
    _corpus_in_args(p, "synthetic")
    _corpus_out_args(p)
    p.add_argument("--factor", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p = corpus.add_parser("pseudo", help="pseudo-related language via letter cipher")
    _corpus_in_args(p)
    _corpus_out_args(p)
    p.add_argument("--keep-percent", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p = corpus.add_parser("corrupt", help="word order and pairing corruption")
    _corpus_in_args(p)
    _corpus_out_args(p)
    p.add_argument("--mode", choices=CORRUPTION_MODES, required=True)
    p.add_argument("--seed", type=int, required=True)

    ev = sub.add_parser("eval", help="MT evaluation statistics").add_subparsers(
        dest="eval_command", required=True
    )
    p = ev.add_parser("bleu", help="corpus BLEU")
    p.add_argument("--candidates", required=True)
    p.add_argument("--references", required=True)
    p.add_argument("--n-max", type=int, default=4)
    p.add_argument("--smoothing", choices=("none", "exponential"), default="exponential")
    p.add_argument("--tokenize", choices=("none", "intl"), default="intl")
    p.add_argument("--out", help="TSV output")
    p = ev.add_parser("bootstrap", help="paired bootstrap significance test")
    p.add_argument("--candidates-a", required=True)
    p.add_argument("--candidates-b", required=True)
    p.add_argument("--references", required=True)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--tokenize", choices=("none", "intl"), default="intl")
    p.add_argument("--out", help="TSV output")
    p = ev.add_parser("stop", help="learning-curve stopping criterion")
    p.add_argument("--curve", required=True, help="TSV with step<TAB>score rows")
    p.add_argument("--window-frac", type=float, default=0.5)
    p.add_argument("--delta-frac", type=float, default=0.005)
    p.add_argument("--min-evals", type=int, default=4)
    p.add_argument("--relative-to", choices=("global", "prewindow"), default="global")
    p.add_argument("--out", help="TSV output")
    p = ev.add_parser("token-analysis", help="child output token overlap classes")
    p.add_argument("--child", required=True)
    p.add_argument("--baseline", required=True)
    p.add_argument("--references", required=True)
    p.add_argument("--out", help="TSV output")

    return parser


def _cmd_learn_bpe(args, manifest):
    corpora = [_read_sentences(path) for path in args.input]
    for path in args.input:
        manifest.add_input(path)
    table = learn_bpe(corpora, args.merges)
    table.save(args.out)
    manifest.add_output(args.out)
    print(f"learned {len(table)} merges -> {args.out}")


def _cmd_apply_bpe(args, manifest):
    table = MergeTable.load(args.table)
    manifest.add_input(args.table)
    manifest.add_input(args.input)
    lines = [" ".join(segment_sentence(table, line)) for line in _read_sentences(args.input)]
    _write_lines(args.out, lines)
    manifest.add_output(args.out)


def _cmd_learn_wp(args, manifest):
    corpora = [_read_sentences(path) for path in args.input]
    for path in args.input:
        manifest.add_input(path)
    spec = VocabSpec(args.target_size, args.tolerance, args.max_train_sentences)
    vocab = learn_wordpiece(corpora, spec)
    vocab.save(args.out)
    manifest.add_output(args.out)
    print(f"learned {len(vocab)} tokens (within_tolerance={vocab.within_tolerance}) -> {args.out}")


def _cmd_apply_wp(args, manifest):
    vocab = Vocabulary.load(args.vocab)
    manifest.add_input(args.vocab)
    manifest.add_input(args.input)
    lines = [" ".join(apply_wordpiece(vocab, line)) for line in _read_sentences(args.input)]
    _write_lines(args.out, lines)
    manifest.add_output(args.out)


def _cmd_transform_vocab(args, manifest):
    parent = Vocabulary.load(args.parent_vocab)
    manifest.add_input(args.parent_vocab)
    if args.child_vocab:
        child = Vocabulary.load(args.child_vocab)
        manifest.add_input(args.child_vocab)
        mapping = map_vocabularies(parent, child, args.variant, args.seed)
        vocab = Vocabulary(mapping.output_tokens())
    elif args.child:
        for path in args.child:
            manifest.add_input(path)
        corpora = [_read_sentences(path) for path in args.child]
        vocab, mapping = transform_vocab(parent, corpora, args.variant, args.seed)
    else:
        raise XfervocabError("give --child corpus files or --child-vocab")

    out_dir = Path(args.out_dir)
    if args.embeddings:
        manifest.add_input(args.embeddings)
        bundle = emit_transfer_bundle(mapping, load_embeddings(args.embeddings), out_dir)
        for path in (bundle.vocabulary_path, bundle.embeddings_path, bundle.mapping_path, bundle.unused_parent_path):
            manifest.add_output(path)
    else:
        out_dir.mkdir(parents=True, exist_ok=True)
        vocab_path = out_dir / "vocabulary.txt"
        vocab.save(vocab_path)
        mapping_path = out_dir / "mapping.tsv"
        mapping_path.write_text(mapping.to_tsv(), encoding="utf-8")
        manifest.add_output(vocab_path)
        manifest.add_output(mapping_path)
    shared = sum(1 for e in mapping.entries if e.shared)
    print(f"{args.variant}: {shared}/{len(mapping.entries)} slots shared -> {args.out_dir}")


def _cmd_merge_vocab(args, manifest):
    if args.parent_vocab and args.child_vocab:
        parent = Vocabulary.load(args.parent_vocab)
        child = Vocabulary.load(args.child_vocab)
        manifest.add_input(args.parent_vocab)
        manifest.add_input(args.child_vocab)
        merged = merge_vocabs(parent, child)
        report = None
    else:
        if args.target_size is None:
            raise XfervocabError("corpus mode needs --target-size")
        parent_corpus = _read_corpus(args, "parent")
        child_corpus = _read_corpus(args, "child")
        for path in _corpus_inputs_of(args, "parent") + _corpus_inputs_of(args, "child"):
            manifest.add_input(path)
        merged, report = build_merged_vocab(parent_corpus, child_corpus, args.target_size, args.tolerance)
    merged.save(args.out)
    manifest.add_output(args.out)
    if report is not None:
        print(
            f"merged size {report.final_size} in {report.iterations} iterations "
            f"(within_tolerance={report.within_tolerance})"
        )
        if args.report:
            Path(args.report).write_text(report.to_tsv(), encoding="utf-8")
            manifest.add_output(args.report)
    else:
        print(f"merged {len(merged)} tokens -> {args.out}")


def _cmd_balanced_vocab(args, manifest):
    parent_corpus = _read_corpus(args, "parent")
    child_corpus = _read_corpus(args, "child")
    for path in _corpus_inputs_of(args, "parent") + _corpus_inputs_of(args, "child"):
        manifest.add_input(path)
    vocab = build_balanced_vocab(parent_corpus, child_corpus, args.target_size, args.tolerance, args.seed)
    vocab.save(args.out)
    manifest.add_output(args.out)
    print(f"balanced vocabulary: {len(vocab)} tokens -> {args.out}")


def _write_report(args, manifest, tsv: str) -> None:
    if args.out:
        Path(args.out).write_text(tsv, encoding="utf-8")
        manifest.add_output(args.out)


def _cmd_diag(args, manifest):
    vocab = Vocabulary.load(args.vocab)
    manifest.add_input(args.vocab)
    if args.diag_command == "rate":
        sentences = [s for path in args.input for s in _read_sentences(path)]
        for path in args.input:
            manifest.add_input(path)
        rate = segmentation_rate(vocab, sentences)
        print(f"segmentation_rate\t{rate:.4f}")
        _write_report(args, manifest, f"segmentation_rate\n{rate!r}\n")
    elif args.diag_command == "usage":
        sentences = [s for path in args.input for s in _read_sentences(path)]
        for path in args.input:
            manifest.add_input(path)
        predicate = None
        if args.char_range:
            ranges = []
            for spec in args.char_range:
                lo, _, hi = spec.partition("-")
                ranges.append((int(lo, 0), int(hi, 0)))
            predicate = unicode_range_predicate(ranges)
        usage = vocab_usage(vocab, sentences, predicate)
        print(f"vocab_usage\t{usage:.4f}")
        _write_report(args, manifest, f"vocab_usage\n{usage!r}\n")
    elif args.diag_command == "overlap":
        corpora = {}
        for item in args.corpus:
            lang, _, path = item.partition("=")
            if not path:
                raise XfervocabError(f"--corpus expects LANG=FILE, got {item!r}")
            corpora[lang] = _read_sentences(path)
            manifest.add_input(path)
        breakdown = overlap_breakdown(vocab, corpora, args.min_count, args.parent, args.child)
        langs = sorted(corpora)
        width = max(16, max(len(lang) for lang in langs) + 2)
        header = "".join(lang.ljust(width) for lang in langs) + "tokens".rjust(8) + "%".rjust(9)
        print(header)
        total = len(vocab)

        def row(marks, count):
            cells = "".join(str(m).ljust(width) for m in marks)
            print(f"{cells}{count:>8}{100.0 * count / total:>8.2f}%")

        for subset in sorted(breakdown.classes, key=lambda s: (len(s), sorted(s))):
            row(["+" if lang in subset else "-" for lang in langs], breakdown.classes[subset])
        if breakdown.reused_parent is not None:
            row(["reused parent"] + [""] * (len(langs) - 1), breakdown.reused_parent)
        if breakdown.unused_by_child is not None:
            row(["unused by child"] + [""] * (len(langs) - 1), breakdown.unused_by_child)
        _write_report(args, manifest, breakdown.to_tsv())
    elif args.diag_command == "filter-impact":
        corpus = _read_corpus(args)
        for path in _corpus_inputs_of(args):
            manifest.add_input(path)
        report = length_filter_impact(vocab, corpus, args.threshold)
        print(f"kept {report.kept}\tdropped {report.dropped}\tdropped_fraction {report.dropped_fraction:.4f}")
        _write_report(args, manifest, report.to_tsv())


def _cmd_corpus(args, manifest):
    if args.corpus_command == "sample":
        if args.size is not None:
            corpus = _read_corpus(args)
            for path in _corpus_inputs_of(args):
                manifest.add_input(path)
            out = subsample(corpus, args.size, args.seed)
        elif args.per_side is not None:
            a = _read_corpus(args, "a")
            b = _read_corpus(args, "b")
            for path in _corpus_inputs_of(args, "a") + _corpus_inputs_of(args, "b"):
                manifest.add_input(path)
            out = sample_equal(a, b, args.per_side, args.seed)
        else:
            raise XfervocabError("give --per-side (two corpora) or --size (downscale one)")
    elif args.corpus_command == "mix":
        authentic = _read_corpus(args, "authentic")
        synthetic = _read_corpus(args, "synthetic")
        for path in _corpus_inputs_of(args, "authentic") + _corpus_inputs_of(args, "synthetic"):
            manifest.add_input(path)
        out = mix_with_oversample(authentic, synthetic, args.factor, args.seed)
    else:
        corpus = _read_corpus(args)
        for path in _corpus_inputs_of(args):
            manifest.add_input(path)
        if args.corpus_command == "filter":
            out, report = filter_by_word_length(corpus, args.min_words, args.max_words)
            if args.max_subwords is not None:
                if not args.vocab:
                    raise XfervocabError("--max-subwords needs --vocab")
                vocab = Vocabulary.load(args.vocab)
                manifest.add_input(args.vocab)
                out, sub_report = filter_by_subword_length(out, vocab, args.max_subwords)
                report = FilterReport.from_counts(sub_report.kept, report.dropped + sub_report.dropped)
            if args.report:
                Path(args.report).write_text(report.to_tsv(), encoding="utf-8")
                manifest.add_output(args.report)
            print(f"kept {report.kept}\tdropped {report.dropped}\tdropped_fraction {report.dropped_fraction:.4f}")
        elif args.corpus_command == "pseudo":
            out = make_pseudo_related(corpus, args.keep_percent, args.seed)
        elif args.corpus_command == "corrupt":
            out = corrupt_word_order(corpus, args.mode, args.seed)
    _write_corpus(args, out, manifest)


def _cmd_eval(args, manifest):
    if args.eval_command == "bleu":
        candidates = _read_sentences(args.candidates)
        references = _read_sentences(args.references)
        manifest.add_input(args.candidates)
        manifest.add_input(args.references)
        report = bleu(candidates, references, args.n_max, args.smoothing, args.tokenize)
        print(f"{report.score:.2f}")
        print(report.signature())
        _write_report(args, manifest, report.to_tsv())
    elif args.eval_command == "bootstrap":
        cand_a = _read_sentences(args.candidates_a)
        cand_b = _read_sentences(args.candidates_b)
        references = _read_sentences(args.references)
        for path in (args.candidates_a, args.candidates_b, args.references):
            manifest.add_input(path)
        result = paired_bootstrap(
            cand_a, cand_b, references, args.samples, args.alpha, args.seed, tokenization=args.tokenize
        )
        print(
            f"wins_a {result.wins_a}\twins_b {result.wins_b}\tties {result.ties}\tbetter {result.better}"
        )
        _write_report(args, manifest, result.to_tsv())
    elif args.eval_command == "stop":
        curve = LearningCurve.from_tsv(args.curve)
        manifest.add_input(args.curve)
        stop, best_step = should_stop(
            curve, args.window_frac, args.delta_frac, args.min_evals, args.relative_to
        )
        print(f"stop {str(stop).lower()}\tbest_step {best_step}")
        _write_report(args, manifest, f"stop\tbest_step\n{str(stop).lower()}\t{best_step}\n")
    elif args.eval_command == "token-analysis":
        child = [line.split() for line in _read_sentences(args.child)]
        baseline = [line.split() for line in _read_sentences(args.baseline)]
        references = [line.split() for line in _read_sentences(args.references)]
        for path in (args.child, args.baseline, args.references):
            manifest.add_input(path)
        overlap = token_overlap_analysis(child, baseline, references)
        print(
            f"baseline_and_reference {overlap.baseline_and_reference}\tbaseline_only {overlap.baseline_only}"
            f"\treference_only {overlap.reference_only}\tneither {overlap.neither}"
        )
        _write_report(args, manifest, overlap.to_tsv())


_HANDLERS = {
    "learn-bpe": _cmd_learn_bpe,
    "apply-bpe": _cmd_apply_bpe,
    "learn-wp": _cmd_learn_wp,
    "apply-wp": _cmd_apply_wp,
    "transform-vocab": _cmd_transform_vocab,
    "merge-vocab": _cmd_merge_vocab,
    "balanced-vocab": _cmd_balanced_vocab,
    "diag": _cmd_diag,
    "corpus": _cmd_corpus,
    "eval": _cmd_eval,
}


def _manifest_target(args) -> Path | None:
    if args.manifest:
        return Path(args.manifest)
    for attr in ("out", "out_tsv", "out_source", "out_dir"):
        value = getattr(args, attr, None)
        if value:
            return Path(str(value) + ".manifest.json")
    return None


def _set_defaults_everywhere(parser: argparse.ArgumentParser, values: dict) -> None:
    parser.set_defaults(**values)
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            for sub in action.choices.values():
                _set_defaults_everywhere(sub, values)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()

    config_probe = argparse.ArgumentParser(add_help=False)
    config_probe.add_argument("--config")
    probed, _ = config_probe.parse_known_args(argv)
    if probed.config:
        _set_defaults_everywhere(parser, _load_config(probed.config))

    args = parser.parse_args(argv)
    manifest = _Manifest(argv)
    manifest.seed = getattr(args, "seed", None)
    try:
        _HANDLERS[args.command](args, manifest)
        target = _manifest_target(args)
        if target is not None:
            manifest.write(target)
        return 0
    except (XfervocabError, OSError, ValueError) as exc:
        print(f"xfervocab: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
