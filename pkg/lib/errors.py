"""Exception hierarchy shared by every module of the lab."""


class LabError(Exception):
    message = ""
    exit_code = 2

    def __init__(self, *args, **kwargs):
        args = list(args)
        if len(args) > 0:
            self.message = str(args.pop(0))
        for key in list(kwargs.keys()):
            setattr(self, key, kwargs.pop(key))
        if not self.message:
            self.message = type(self).__doc__ or type(self).__name__
        super().__init__(self.message, *args)


class ConfigError(LabError):
    """Config file could not be parsed or failed schema validation"""
    line = None
    column = None

    def __str__(self):
        if self.line is not None:
            return f"{self.message} (line {self.line}, column {self.column})"
        return self.message


class UsageError(LabError):
    """Invalid command-line usage"""


class PreconditionError(LabError):
    """An operation precondition was violated"""
    constraint = None


class StructuralError(LabError):
    """Array size, grid or representation mismatch"""


class DomainError(LabError):
    """A symbol evaluated to a non-finite value"""
    point = None


class NumericalFailure(LabError):
    """Non-finite or exploding state during time stepping"""
    exit_code = 3
    time = None


class ExperimentOutputError(LabError):
    """Experiment directory is missing expected outputs"""
