"""Exception hierarchy shared by every fuzzcorr module."""


class FuzzCorrError(ValueError):
    """Base class for all errors raised by fuzzcorr."""


class InvalidConfig(FuzzCorrError):
    pass


class MalformedCsv(FuzzCorrError):
    def __init__(self, message, row=None, column=None):
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column}")
        if where:
            message = f"{', '.join(where)}: {message}"
        super().__init__(message)
        self.row = row
        self.column = column


class OutOfRangeMembership(MalformedCsv):
    pass


class IndexOutOfRange(FuzzCorrError, IndexError):
    pass


class DisjointnessViolated(FuzzCorrError):
    pass


class ZeroAntecedentSupport(FuzzCorrError, ZeroDivisionError):
    pass


class LengthMismatch(FuzzCorrError):
    pass


class TooFewRecords(FuzzCorrError):
    pass


class NoFrequentItems(FuzzCorrError):
    pass


class TargetNotFrequent(FuzzCorrError):
    pass


class UnknownTarget(FuzzCorrError, KeyError):
    def __str__(self):
        # KeyError would repr() the message
        return str(self.args[0]) if self.args else ""


class InstanceTooLarge(FuzzCorrError):
    pass
