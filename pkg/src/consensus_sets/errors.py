"""Exception hierarchy shared by every module of the package."""


class ConsensusError(Exception):
    """Base class for all errors raised by consensus_sets."""


class DimensionMismatch(ConsensusError, ValueError):
    pass


class InvalidPattern(ConsensusError, ValueError):
    pass


class NotSymmetricPattern(ConsensusError, ValueError):
    pass


class NegativeEntry(ConsensusError, ValueError):
    def __init__(self, i, j, value=None):
        self.i, self.j, self.value = i, j, value
        super().__init__(f"NegativeEntry({i},{j}): entry {value} is negative")


class RowSumNotOne(ConsensusError, ValueError):
    def __init__(self, i, actual):
        self.i, self.actual = i, actual
        super().__init__(f"RowSumNotOne({i}, {actual})")


class SinkNode(ConsensusError, ValueError):
    def __init__(self, i):
        self.i = i
        super().__init__(f"SinkNode({i}): node has out-degree 0")


class NotSymmetric(ConsensusError, ValueError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"NotSymmetric({index}): matrix {index} is not symmetric")


class EmptyMatrixSet(ConsensusError, ValueError):
    pass


class InstanceTooLarge(ConsensusError):
    pass


class ResourceCapExceeded(ConsensusError):
    pass


class UnknownNode(ConsensusError, KeyError):
    pass


class DimacsError(ConsensusError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MalformedHeader(DimacsError):
    pass


class LiteralOutOfRange(DimacsError):
    pass


class UnterminatedClause(DimacsError):
    pass


class EmptyClause(DimacsError):
    pass
