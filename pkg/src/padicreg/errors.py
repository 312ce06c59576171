class PreconditionError(ValueError):
    """A mathematical precondition on the input does not hold."""


class InconsistentDataError(PreconditionError):
    """Two rows share features but disagree on the target."""

    def __init__(self, i: int, j: int):
        self.rows = (i, j)
        super().__init__(f"rows {i} and {j} have equal features but different targets")


class DegenerateDataError(PreconditionError):
    """Some nonzero affine function vanishes on every feature vector."""

    def __init__(self, certificate: tuple[int, ...]):
        self.certificate = certificate
        super().__init__(f"dataset is degenerate; affine certificate {list(certificate)}")


class InsufficientDataError(PreconditionError):
    pass
