"""Exception types raised by the toolkit."""


class RoamError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(RoamError, ValueError):
    """A configuration file could not be parsed or names an invalid field."""


class SchemaValidationError(ConfigError):
    def __init__(self, report):
        self.report = report
        super().__init__("schema validation failed:\n" + "\n".join(
            f"  error: {e}" for e in report.errors))


class ScalingError(RoamError, ValueError):
    pass


class DegenerateRangeError(ScalingError):
    """min == max, so min-max scaling has no defined output."""


class RubricError(RoamError, ValueError):
    pass


class DataError(RoamError, ValueError):
    """A data row violates a precondition; carries the row id and field."""

    def __init__(self, message, row_id=None, field=None):
        self.row_id = row_id
        self.field = field
        where = []
        if row_id is not None:
            where.append(f"row {row_id}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
