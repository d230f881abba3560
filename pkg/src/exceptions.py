class SolverException(Exception):
    """
    EXIT_CODE 1
    """

    exit_code: int = 1
    exit_codes = {1: {"description": "Study could not be completed"}}

    def __init__(self, detail: str | None = None) -> None:
        self.detail = detail or self.exit_codes[self.exit_code]["description"]
        super().__init__(self.detail)


class InvalidArgument(SolverException, ValueError):
    """
    EXIT_CODE 1
    """

    exit_codes = {1: {"description": "Invalid argument"}}


class ConfigurationError(SolverException):
    """
    EXIT_CODE 1
    """

    exit_codes = {1: {"description": "Invalid settings file"}}


class SingularMatrixError(SolverException):
    """
    EXIT_CODE 2
    """

    exit_code = 2
    exit_codes = {2: {"description": "Matrix is singular"}}

    def __init__(self, detail: str | None = None, pivot: int | None = None) -> None:
        self.pivot = pivot
        if detail is None and pivot is not None:
            detail = f"Matrix is singular: zero pivot at row {pivot}"
        super().__init__(detail)


class SolverFailure(SolverException):
    """
    EXIT_CODE 2
    """

    exit_code = 2
    exit_codes = {2: {"description": "Linear solve failed"}}

    def __init__(self, detail: str | None = None, level: int | None = None, slab: int | None = None) -> None:
        self.level = level
        self.slab = slab
        context = []
        if level is not None:
            context.append(f"level {level}")
        if slab is not None:
            context.append(f"slab {slab}")
        detail = detail or self.exit_codes[2]["description"]
        if context:
            detail = f"{detail} ({', '.join(context)})"
        super().__init__(detail)


class SelfTestFailure(SolverException):
    """
    EXIT_CODE 3
    """

    exit_code = 3
    exit_codes = {3: {"description": "Self-test failed"}}

    def __init__(self, failed: list[str]) -> None:
        self.failed = failed
        super().__init__(f"Self-test failed: {', '.join(failed)}")
