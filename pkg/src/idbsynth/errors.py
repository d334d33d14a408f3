"""Exception hierarchy for the idbsynth pipeline.

Every module raises subclasses of IdbsynthError so CLI code can map
failures to documented exit codes without string matching.
"""


class IdbsynthError(Exception):
    """Base class for all idbsynth errors."""


# --- record generation / parsing ---

class UnknownIssuer(IdbsynthError):
    pass


class MalformedResponse(IdbsynthError):
    def __init__(self, message, segment=None, missing_fields=None):
        super().__init__(message)
        self.segment = segment
        self.missing_fields = list(missing_fields or [])


class FormatViolation(IdbsynthError):
    def __init__(self, message, field=None, segment=None):
        super().__init__(message)
        self.field = field
        self.segment = segment


class UnknownKeyField(IdbsynthError):
    pass


# --- LLM client ---

class MissingPlaceholder(IdbsynthError):
    pass


class EndpointUnreachable(IdbsynthError):
    pass


class RateLimitedExhausted(IdbsynthError):
    pass


class MalformedApiResponse(IdbsynthError):
    pass


# --- AAMVA codec ---

class MissingMandatoryField(IdbsynthError):
    def __init__(self, element_id):
        super().__init__(f"mandatory element missing: {element_id}")
        self.element_id = element_id


class NonAsciiValue(IdbsynthError):
    pass


class BadHeader(IdbsynthError):
    pass


class DesignatorOutOfBounds(IdbsynthError):
    pass


class DuplicateElement(IdbsynthError):
    pass


# --- PDF417 codec ---

class EmptyPayload(IdbsynthError):
    pass


class CapacityExceeded(IdbsynthError):
    pass


class RowLimitExceeded(IdbsynthError):
    pass


class UncorrectableSymbol(IdbsynthError):
    pass


class UnknownPattern(IdbsynthError):
    pass


class GeometryMismatch(IdbsynthError):
    pass


# --- Code 128 codec ---

class UnencodableCharacter(IdbsynthError):
    pass


class PatternMismatch(IdbsynthError):
    pass


class ChecksumMismatch(IdbsynthError):
    pass


class BadStop(IdbsynthError):
    pass


# --- compositor / augment ---

class PlacementTooSmall(IdbsynthError):
    pass


class DegenerateBox(IdbsynthError):
    pass


# --- diversity ---

class EmptyCorpus(IdbsynthError):
    pass


class MissingField(IdbsynthError):
    pass


# --- configuration / CLI ---

class ConfigError(IdbsynthError):
    pass
