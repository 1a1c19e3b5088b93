"""Exception types shared across the package."""


class LfgError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(LfgError):
    """Invalid or inconsistent run configuration."""


# --- data loading / splitting ---------------------------------------------

class ParseError(LfgError):
    def __init__(self, row, column, reason):
        super().__init__(f"row {row}, column {column!r}: {reason}")
        self.row = row
        self.column = column
        self.reason = reason


class LabelColumnMissing(LfgError):
    pass


class DegenerateDataset(LfgError):
    pass


class StratificationImpossible(LfgError):
    pass


class KTooLarge(LfgError):
    pass


# --- operations / expressions ----------------------------------------------

class UnknownOperation(LfgError):
    pass


class DomainViolation(LfgError):
    def __init__(self, op, fraction_bad, detail=""):
        msg = f"{op}: {fraction_bad:.3f} of values violate the domain guard"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
        self.op = op
        self.fraction_bad = fraction_bad


class LengthMismatch(LfgError):
    pass


class UnknownColumn(LfgError):
    pass


class ExprSyntaxError(LfgError):
    pass


# --- agents -----------------------------------------------------------------

class MalformedResponse(LfgError):
    def __init__(self, reason, detail=""):
        super().__init__(f"{reason}: {detail}" if detail else reason)
        self.reason = reason
        self.detail = detail


class AgentUnavailable(LfgError):
    pass


# --- search ------------------------------------------------------------------

class AllAgentsEmpty(LfgError):
    pass


class RootHasNoUcb(LfgError):
    pass


class NothingToSelect(LfgError):
    pass


# --- evaluation ---------------------------------------------------------------

class EmptyFeatureMatrix(LfgError):
    pass


class DegenerateTraining(LfgError):
    pass


# --- cli -----------------------------------------------------------------------

class UnknownFeature(LfgError):
    pass


class IncompleteRun(LfgError):
    pass


#: errors caused by bad user input / configuration (CLI exit code 2);
#: everything else is a runtime failure (exit code 3).
USER_ERRORS = (
    ConfigError,
    ParseError,
    LabelColumnMissing,
    DegenerateDataset,
    KTooLarge,
    UnknownFeature,
    FileNotFoundError,
)
