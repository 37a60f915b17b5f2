"""Exception hierarchy"""


class SubchirpError(Exception):
    """Base class for all library errors"""


class DimensionError(SubchirpError, ValueError):
    """Operands have incompatible lengths or shapes"""


class DomainError(SubchirpError, ValueError):
    """Argument lies outside the mathematical domain of an operation"""


class ResourceError(SubchirpError):
    """Requested materialization is too large"""


class CliffordConsistencyError(SubchirpError):
    """Conjugating a Pauli operator did not produce a Pauli operator"""


class DecodeError(SubchirpError):
    """Signal is not a valid binary subspace chirp"""


class ConfigError(SubchirpError, ValueError):
    """Invalid simulation or command-line configuration"""


class InputError(SubchirpError):
    """Input file is missing, unreadable or malformed"""


class OutputError(SubchirpError):
    """Output file cannot be written"""
