"""
Error types for the DECoR waveform design toolkit
"""

from typing import Optional


class DecorError(Exception):
    """Base class for every error raised by the toolkit"""


class ConfigError(DecorError, ValueError):
    """Invalid or unreadable experiment configuration"""

    def __init__(self, message: str, key: Optional[str] = None, line: Optional[int] = None):
        self.key = key
        self.line = line
        location = ""
        if key is not None:
            location += f" [key '{key}'"
            location += f", line {line}]" if line is not None else "]"
        elif line is not None:
            location += f" [line {line}]"
        super().__init__(f"{message}{location}")


class DomainError(DecorError, ValueError):
    """Input outside the mathematical domain of an operation"""


class InvalidOffsetError(DomainError):
    """Shift offset with |k| >= n"""


class DegenerateDenominatorError(DomainError):
    """s^H B s is at or below the denominator floor, so f(s) is undefined"""


class GridTooLargeError(DomainError):
    """Brute-force grid exceeds the enumeration limit"""


class OutputError(DecorError, OSError):
    """A result file could not be written"""

    def __init__(self, path: str, reason: str):
        self.path = path
        super().__init__(f"Could not write {path}: {reason}")
