"""Exception types shared across the package."""


class MeanFieldError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(MeanFieldError, ValueError):
    pass


class ShapeError(MeanFieldError, ValueError):
    pass


class DomainError(MeanFieldError, ValueError):
    pass


class DegenerateColumnError(MeanFieldError, ValueError):
    def __init__(self, layer: int, column: int, total: float):
        super().__init__(
            f"weight column {column} of layer {layer} sums to {total!r}; cannot normalize"
        )
        self.layer = layer
        self.column = column


class ConvergenceError(MeanFieldError, RuntimeError):
    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


class EvaluationError(MeanFieldError, RuntimeError):
    pass


class DivergenceError(MeanFieldError, RuntimeError):
    def __init__(self, epoch: int, loss: float):
        super().__init__(f"training diverged at epoch {epoch}: loss={loss!r}")
        self.epoch = epoch


class ParseError(MeanFieldError, ValueError):
    def __init__(self, path, line: int, reason: str):
        super().__init__(f"{path}:{line}: {reason}")
        self.line = line


class EmptyClassError(MeanFieldError, ValueError):
    pass


class ConfigError(MeanFieldError, ValueError):
    """Bad configuration: unknown key, unparsable value or violated invariant."""
