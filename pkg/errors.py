"""
Exception hierarchy shared by every module.

Library code raises these; only main.py catches them and turns them into
process exit codes (0 success, 1 negative finding, 2 config, 3 dimension,
4 numerical failure).
"""

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_CONFIG = 2
EXIT_DIMENSION = 3
EXIT_NUMERICAL = 4


class TFLocError(Exception):
    """Base class; subclasses pick the exit code main.py reports."""
    exit_code = EXIT_NUMERICAL


class ConfigError(TFLocError):
    exit_code = EXIT_CONFIG


class DimensionError(TFLocError):
    exit_code = EXIT_DIMENSION


class ZeroWindowError(TFLocError):
    exit_code = EXIT_DIMENSION


class LatticeError(TFLocError):
    exit_code = EXIT_CONFIG


class SymbolSignError(TFLocError):
    exit_code = EXIT_CONFIG


class SupportError(TFLocError):
    exit_code = EXIT_CONFIG


class BlockSizeError(TFLocError):
    exit_code = EXIT_CONFIG


class EmptyEnsembleError(TFLocError):
    exit_code = EXIT_CONFIG


class NotHermitianError(TFLocError):
    exit_code = EXIT_NUMERICAL


class NotAFrameError(TFLocError):
    exit_code = EXIT_NUMERICAL


class PartitionError(TFLocError):
    exit_code = EXIT_NUMERICAL


class ExhaustedError(TFLocError):
    """Raised when the eigenfunction search runs out of eigenvectors."""
    exit_code = EXIT_NUMERICAL

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
