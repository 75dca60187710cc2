"""Exception types raised across the package."""


class DeepBsdeError(Exception):
    """Base class for every package-specific error."""


class ArchitectureError(DeepBsdeError, ValueError):
    """Invalid network architecture (empty width list, non-positive width, broken shape chain)."""


class ShapeError(DeepBsdeError, ValueError):
    """Array shapes do not match the operation's contract."""


class EmptyTapeError(DeepBsdeError, RuntimeError):
    """Backward pass requested before any forward computation was recorded."""


class GridError(DeepBsdeError, ValueError):
    """Invalid time grid (non-positive horizon or step count)."""


class BlowUpError(DeepBsdeError, FloatingPointError):
    """A simulated state left the finite range; carries the offending path and step."""

    def __init__(self, message, path_index=None, step_index=None):
        super().__init__(message)
        self.path_index = path_index
        self.step_index = step_index


class CapabilityError(DeepBsdeError, ValueError):
    """The requested operation needs information the problem does not provide."""


class CommutativityError(DeepBsdeError, ValueError):
    """The diffusion does not satisfy the commutativity condition the scheme assumes."""


class SchemeMismatchError(DeepBsdeError, ValueError):
    """Model, path batch, or problem were built for a different discretization scheme."""


class NonFiniteGradientError(DeepBsdeError, FloatingPointError):
    """A gradient became NaN/inf; message names the parameter and optimizer step."""


class TrainingDivergedError(DeepBsdeError, RuntimeError):
    """Training loss became non-finite; the report collected so far is attached."""

    def __init__(self, message, report=None, step=None):
        super().__init__(message)
        self.report = report
        self.step = step


class RegistryError(DeepBsdeError, ValueError):
    """Unknown problem name or override key; message lists the valid options."""


class ConfigError(DeepBsdeError, ValueError):
    """Bad run configuration; carries the source line when parsed from a file."""

    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class FitRefusedError(DeepBsdeError, ValueError):
    """A scaling fit was refused (too few points or degenerate data)."""


class NotLinearError(DeepBsdeError, ValueError):
    """The single-network terminal trainer was given a problem with a nonzero nonlinearity."""
