"""xfervocab: corpus and subword-vocabulary engineering for transfer learning.

Deterministic building blocks for preparing, transforming, and diagnosing
subword vocabularies (wordpiece and BPE), manipulating parallel corpora,
and computing MT evaluation statistics.  Everything is a pure function over
immutable values; every stochastic operation takes an explicit seed.
"""

from .bpe import MergeRule, MergeTable, apply_bpe, enumerate_substrings, learn_bpe, segment_sentence
from .corpus import (
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
    OverlapBreakdown,
    length_filter_impact,
    overlap_breakdown,
    segmentation_rate,
    unicode_range_predicate,
    vocab_usage,
)
from .errors import (
    AlignmentError,
    CorpusDecodeError,
    CorpusFormatError,
    EmbeddingShapeError,
    EscapeDecodeError,
    SampleSizeError,
    XfervocabError,
)
from .mteval import (
    BleuReport,
    LearningCurve,
    SignificanceResult,
    TokenOverlap,
    bleu,
    paired_bootstrap,
    should_stop,
    token_overlap_analysis,
)
from .sharedvocab import MergedBuildReport, build_balanced_vocab, build_merged_vocab, merge_vocabs
from .transfer import (
    VocabMapping,
    emit_transfer_bundle,
    load_embeddings,
    map_vocabularies,
    save_embeddings_binary,
    save_embeddings_tsv,
    transform_vocab,
)
from .wordpiece import (
    Vocabulary,
    VocabSpec,
    WordpieceLearner,
    apply_wordpiece,
    detokenize,
    learn_wordpiece,
)

__version__ = "0.1.0"
