"""Exception hierarchy shared across the toolkit."""


class XfervocabError(Exception):
    """Base class for all toolkit errors."""


class AlignmentError(XfervocabError):
    """Parallel corpus sides have different lengths."""


class CorpusFormatError(XfervocabError):
    """A corpus file violates the expected plain-text layout."""


class CorpusDecodeError(XfervocabError):
    """A corpus file contains bytes that are not valid UTF-8."""


class EscapeDecodeError(XfervocabError):
    """A token stream contains a malformed code-point escape."""


class SampleSizeError(XfervocabError):
    """A sampling request exceeds the available population."""


class EmbeddingShapeError(XfervocabError):
    """An embedding matrix does not match the vocabulary it is paired with."""
