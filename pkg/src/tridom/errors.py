"""Exception hierarchy shared by every tridom module."""


class TridomError(Exception):
    """Base class for all library errors."""


# embedding / construction
class EmbeddingError(TridomError):
    pass


class NonTriangularFace(EmbeddingError):
    pass


class InconsistentRotation(EmbeddingError):
    pass


class MultiEdgeInSimpleMode(EmbeddingError):
    pass


class Disconnected(EmbeddingError):
    pass


class DisconnectingDeletion(EmbeddingError):
    pass


class UnclassifiableWalk(EmbeddingError):
    pass


class MultiEdgeCreated(EmbeddingError):
    pass


class NotOnFace(EmbeddingError):
    pass


# codecs
class CodecError(TridomError):
    pass


class BadHeader(CodecError):
    pass


class TruncatedStream(CodecError):
    pass


class VertexCountTooLarge(CodecError):
    pass


class ValidationFailed(CodecError):
    pass


class ParseError(CodecError):
    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DigestMismatch(CodecError):
    pass


# generators
class UnknownName(TridomError):
    pass


class NoPerfectMatching(TridomError):
    pass


# coloring
class BudgetExhausted(TridomError):
    pass


class NoHeavyDiagonal(TridomError):
    pass


class PsiInvariantViolation(TridomError):
    def __init__(self, message: str, vertex: int | None = None):
        super().__init__(message)
        self.vertex = vertex


# pipeline
class UnreducibleFace(TridomError):
    pass


class ExtensionFailed(TridomError):
    def __init__(self, message: str, witness: int | None = None):
        super().__init__(message)
        self.witness = witness


class NotBipartite(TridomError):
    pass


class CoverTooLarge(TridomError):
    pass


class AssemblyInvariantViolation(TridomError):
    pass


class CertificationFailed(TridomError):
    pass


# oracle
class TooLarge(TridomError):
    pass
