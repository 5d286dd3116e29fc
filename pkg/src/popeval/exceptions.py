"""Exception hierarchy.

Everything raised deliberately by the package derives from :class:`PopevalError`.
Data-shape problems additionally derive from :class:`ValueError` so callers
using the sklearn-style validation idiom can catch them generically.
"""


class PopevalError(Exception):
    """Base class for all package errors."""


# core

class LengthMismatch(PopevalError, ValueError):
    pass


class ValueOutOfRange(PopevalError, ValueError):
    def __init__(self, index, value=None):
        self.index = index
        self.value = value
        super().__init__(f"utility at index {index} is outside [0, 1]: {value!r}")


class DuplicateTopic(PopevalError, ValueError):
    def __init__(self, topic_id):
        self.topic_id = topic_id
        super().__init__(f"duplicate topic id {topic_id!r}")


# trec_io

class ParseError(PopevalError, ValueError):
    """A run or qrels file could not be parsed."""

    filename = None

    def annotate(self, filename):
        self.filename = str(filename)
        self.args = (f"{filename}: {self.args[0]}",) + self.args[1:]
        return self


class MalformedLine(ParseError):
    def __init__(self, line_no, line=""):
        self.line_no = line_no
        super().__init__(f"malformed line {line_no}: {line!r}")


class NonIntegerGrade(ParseError):
    def __init__(self, line_no, grade=""):
        self.line_no = line_no
        super().__init__(f"non-integer relevance grade on line {line_no}: {grade!r}")


class DuplicateJudgment(ParseError):
    def __init__(self, topic_id, doc_id):
        self.topic_id, self.doc_id = topic_id, doc_id
        super().__init__(f"duplicate judgment for ({topic_id}, {doc_id})")


class DuplicateDoc(ParseError):
    def __init__(self, topic_id, doc_id):
        self.topic_id, self.doc_id = topic_id, doc_id
        super().__init__(f"document {doc_id!r} retrieved twice for topic {topic_id!r}")


class MixedRunTags(ParseError):
    def __init__(self, tags):
        self.tags = sorted(tags)
        super().__init__(f"run file mixes run tags: {', '.join(self.tags)}")


class EmptyCollection(PopevalError, ValueError):
    pass


# metrics

class NoJudgedTopics(PopevalError, ValueError):
    pass


class UnknownMetric(PopevalError, ValueError):
    pass


# aggregate / order

class SampleTooSmall(PopevalError, ValueError):
    pass


class BadWindow(PopevalError, ValueError):
    pass


class TopicMismatch(PopevalError, ValueError):
    pass


# meta

class UnknownMethod(PopevalError, ValueError):
    pass


class UnknownProperty(PopevalError, ValueError):
    pass


class SystemSetMismatch(PopevalError, ValueError):
    pass


class DegenerateOrdering(PopevalError, ValueError):
    """Kendall's tau_b is undefined because one ordering is a single tie group."""
