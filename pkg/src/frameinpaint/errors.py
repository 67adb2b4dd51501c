class FrameError(Exception):
    """Base class for all package errors."""


class SizeError(FrameError, ValueError):
    pass


class ScaleError(FrameError, ValueError):
    """A band does not fit the grid or the requested scale is invalid."""


class ShapeError(FrameError, ValueError):
    pass


class ArgumentError(FrameError, ValueError):
    pass


class ModelError(FrameError, ValueError):
    pass


class FormatError(FrameError, ValueError):
    def __init__(self, msg, offset=None):
        if offset is not None:
            msg = f"{msg} (byte offset {offset})"
        super().__init__(msg)
        self.offset = offset


class ConfigError(FrameError, ValueError):
    def __init__(self, msg, key=None, line=None):
        where = []
        if key is not None:
            where.append(f"key '{key}'")
        if line is not None:
            where.append(f"line {line}")
        if where:
            msg = f"{msg} [{', '.join(where)}]"
        super().__init__(msg)
        self.key = key
        self.line = line


class ParseError(FrameError, ValueError):
    """Malformed tabular input (sweep CSV)."""

    def __init__(self, msg, line=None):
        super().__init__(f"line {line}: {msg}" if line is not None else msg)
        self.line = line
