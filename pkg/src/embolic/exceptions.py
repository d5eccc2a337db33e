"""Exception types raised by the pipeline stages.

Each carries the stage name and the CLI exit code it maps to
(2 validation, 3 check failure, 4 resource cap).
"""


class PipelineError(Exception):
    stage = "pipeline"
    exit_code = 1


class SpaceValidationError(PipelineError, ValueError):
    stage = "validate"
    exit_code = 2

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ResolutionError(PipelineError, ValueError):
    stage = "croke_estimate"
    exit_code = 2


class CoverageError(PipelineError, RuntimeError):
    """The greedy packing failed to cover the space. Indicates a bug, not bad data."""

    stage = "packing"
    exit_code = 3


class MultiplicityError(PipelineError):
    stage = "nerve"
    exit_code = 4

    def __init__(self, point, size, cap):
        super().__init__(
            f"cover multiplicity {size} at witness point {point} exceeds cap {cap}"
        )
        self.point = point
        self.size = size
        self.cap = cap


class ComplexFormatError(PipelineError, ValueError):
    stage = "homology"
    exit_code = 2

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
