"""Exception hierarchy shared by every module."""


class WadgeLabError(Exception):
    pass


class AlphabetMismatch(WadgeLabError):
    pass


class ParseError(WadgeLabError):
    pass


class MalformedArena(WadgeLabError):
    pass


class ArenaTooLarge(WadgeLabError):
    pass


class NotWinning(WadgeLabError):
    pass


class DisjointnessViolated(WadgeLabError):
    pass


class SelfDualInput(WadgeLabError):
    pass


class NotClosed(WadgeLabError):
    pass


class NotDisjoint(WadgeLabError):
    pass


class DepthExceeded(WadgeLabError):
    pass


class LevelOutOfRange(WadgeLabError):
    pass


class EmptyJoin(WadgeLabError):
    pass


class NotWeaklyRepresentable(WadgeLabError):
    pass


class NotBooleanValued(WadgeLabError):
    pass


class NotDecreasing(WadgeLabError):
    pass


class StableViolation(WadgeLabError):
    """Raised when a weak-output automaton has an oscillating SCC."""

    def __init__(self, violation):
        super().__init__(str(violation))
        self.violation = violation


class RankOverflow(WadgeLabError):
    pass


class InconsistentRankType(WadgeLabError):
    pass


class CertificateMismatch(WadgeLabError):
    pass
