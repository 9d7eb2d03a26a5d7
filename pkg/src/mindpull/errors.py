"""Exception types shared across the engine."""

from __future__ import annotations


class EngineError(Exception):
    """Base class for every error the engine raises on purpose."""


# ---- wire protocol / ingestion ----------------------------------------


class BadMagic(EngineError):
    pass


class UnsupportedVersion(EngineError):
    pass


class LengthMismatch(EngineError):
    pass


class UnknownStreamKind(EngineError):
    pass


class ChannelOverflow(EngineError):
    pass


class EmptyProfile(EngineError):
    pass


class SinkFailure(EngineError):
    """Write to a recording sink failed; `written` counts frames already flushed."""

    def __init__(self, message: str, written: int):
        super().__init__(message)
        self.written = written


class RecordingParseError(EngineError):
    """Malformed recording line; `line` is the 1-based line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class TimestampRegression(EngineError):
    """Timestamp not strictly increasing within one stream."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


# ---- dsp ---------------------------------------------------------------


class WindowNotFull(EngineError):
    pass


class BadSegmentLength(EngineError):
    pass


class BadBand(EngineError):
    pass


# ---- estimator ---------------------------------------------------------


class InsufficientSamples(EngineError):
    """Too few metric updates in a calibration phase; `phase` names which."""

    def __init__(self, phase: str, have: int, need: int):
        super().__init__(f"{phase}: {have} samples, need {need}")
        self.phase = phase
        self.have = have
        self.need = need


class InvalidCalibration(EngineError):
    pass


# ---- game --------------------------------------------------------------


class BadConfig(EngineError):
    """Invalid configuration value; `field` names the offender."""

    def __init__(self, field: str, reason: str):
        super().__init__(f"{field}: {reason}")
        self.field = field
        self.reason = reason


class IllegalTransition(EngineError):
    def __init__(self, phase: str, command: str):
        super().__init__(f"command {command!r} not legal in phase {phase!r}")
        self.phase = phase
        self.command = command


class WrongPhase(EngineError):
    pass


# ---- service -----------------------------------------------------------


class ConfigParseError(EngineError):
    """Configuration file is not valid JSON; carries the line if known."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ConfigValidationError(BadConfig):
    """Configuration parsed but a field is out of contract."""


class BindError(EngineError):
    pass
