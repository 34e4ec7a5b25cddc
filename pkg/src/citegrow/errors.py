"""Exception types shared across the toolkit."""


class CitegrowError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(CitegrowError):
    """An argument value or parameter combination is invalid."""


class IngestError(CitegrowError):
    """Input data is unusable: missing file, malformed records, empty seed."""


class SimulationError(CitegrowError):
    """A growth run reached a state it cannot proceed from."""
