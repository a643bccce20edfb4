"""Exception hierarchy for upblab.

Mathematical refutations (a set is not orthogonal, a matrix is not PSD, ...)
are ordinary return values, not exceptions.  Exceptions signal violated
preconditions, malformed input, or representations that cannot support an
exact computation.
"""


class UpbLabError(Exception):
    """Base class for all upblab errors."""


class NotHermitianError(UpbLabError):
    """Operation requires an exactly Hermitian matrix."""


class NotPsdError(UpbLabError):
    """Operation requires a positive semidefinite matrix."""


class NotInRangeError(UpbLabError):
    """A vector required to lie in the range of an operator does not."""


class BadMaskError(UpbLabError):
    """Party subset out of range or empty where it must not be."""


class BadCutError(BadMaskError):
    """Invalid bipartition cut for a Schmidt-rank computation."""


class ApproximateComparisonError(UpbLabError):
    """An exact decision was requested but only a float comparison exists."""


class MixedRepresentationError(UpbLabError):
    """Two local states cannot be compared exactly across representations."""


class VerificationError(UpbLabError):
    """A candidate product set failed orthogonality verification."""

    def __init__(self, i, j, message):
        super().__init__(message)
        self.pair = (i, j)


class NotOrthogonalError(VerificationError):
    def __init__(self, i, j):
        super().__init__(i, j, f"members {i} and {j} are not orthogonal at any party")


class DuplicateMemberError(VerificationError):
    def __init__(self, i, j):
        super().__init__(i, j, f"members {i} and {j} coincide up to phase")


class NotVerifiedError(UpbLabError):
    """Operation requires a ProductSet that passed verification."""


class NonQubitPartyError(UpbLabError):
    """The qubit-only extendibility decision got a non-qubit party."""


class SpansEverythingError(UpbLabError):
    """Complement of a full basis is the zero operator."""


class InvalidSpecError(UpbLabError):
    """A block-OPB specification violates one of its invariants."""


class NotAnOPBError(UpbLabError):
    """Input claimed to be an orthogonal product basis is not one."""


class StructureViolationError(UpbLabError):
    """A bipartite basis does not carry the qubit block structure."""


class NotRankTwoError(UpbLabError):
    """A tensor exceeds Schmidt rank two across some one-vs-rest cut."""


class DegenerateSplitError(UpbLabError):
    """No exact two-product split exists for the given tensor."""


class UnknownFixtureError(UpbLabError):
    """Requested fixture name is not in the registry."""


class ParseError(UpbLabError):
    """A serialized document is malformed."""

    def __init__(self, message, location=None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class SchemaVersionMismatchError(ParseError):
    """Document schema version is not supported."""
