"""
Exception hierarchy shared by every module
"""

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_CAPACITY = 4


class FerroconnectError(Exception):
    """Base exception for ferroconnect"""
    def __init__(
        self,
        message: str,
        exit_code: int = EXIT_NUMERIC,
        error_code: str = "FERROCONNECT_ERROR"
    ):
        self.message = message
        self.exit_code = exit_code
        self.error_code = error_code
        super().__init__(message)


class UsageError(FerroconnectError):
    """Invalid experiment description or command-line input"""
    def __init__(self, message: str, field: str = None):
        self.field = field
        if field:
            message = f"{field}: {message}"
        super().__init__(message=message, exit_code=EXIT_USAGE, error_code="cli.USAGE")


class DomainError(FerroconnectError):
    """Geometric input rejected by the domain"""
    def __init__(self, reason: str, error_code: str = "geom.INVALID"):
        super().__init__(message=reason, exit_code=EXIT_USAGE, error_code=error_code)


class CapacityError(FerroconnectError):
    """Instance exceeds a configured solver cap"""
    def __init__(self, what: str, size: int, cap: int, module: str = "connection"):
        super().__init__(
            message=f"{what}: {size} exceeds the cap of {cap}",
            exit_code=EXIT_CAPACITY,
            error_code=f"{module}.CAPACITY"
        )


class CoverError(FerroconnectError):
    """Input is not on the unit circle"""
    def __init__(self, reason: str):
        super().__init__(message=reason, exit_code=EXIT_USAGE, error_code="cover.NON_UNIT")


class ResolutionError(FerroconnectError):
    """Angle increment too large to resolve a winding"""
    def __init__(self, step: float, index: int):
        super().__init__(
            message=f"Unresolvable loop: angle step {step:.4f} at position {index}",
            exit_code=EXIT_NUMERIC,
            error_code="lifting.RESOLUTION"
        )


class InconsistencyError(FerroconnectError):
    """Cuts do not match the parity of the field's defects"""
    def __init__(self, reason: str, witness=None):
        self.witness = witness
        if witness is not None:
            reason = f"{reason} (witness plaquette {witness})"
        super().__init__(message=reason, exit_code=EXIT_NUMERIC, error_code="lifting.INCONSISTENT")


class MismatchError(FerroconnectError):
    """Lifting does not cover the reference field"""
    def __init__(self, reason: str):
        super().__init__(message=reason, exit_code=EXIT_NUMERIC, error_code="lifting.MISMATCH")


class MalformedInputError(FerroconnectError):
    """Edge set violates a structural precondition"""
    def __init__(self, reason: str, module: str = "lifting"):
        super().__init__(message=reason, exit_code=EXIT_NUMERIC, error_code=f"{module}.MALFORMED")


class StepSizeError(FerroconnectError):
    """Gradient flow failed to decrease the energy over a sweep"""
    def __init__(self, sweep: int, before: float, after: float):
        super().__init__(
            message=f"Energy rose from {before:.10g} to {after:.10g} during sweep {sweep}",
            exit_code=EXIT_NUMERIC,
            error_code="ferrosim.STEP_SIZE"
        )


class NoMinimumError(FerroconnectError):
    """Scalar minimisation found no interior minimum"""
    def __init__(self, reason: str, module: str = "ferrosim"):
        super().__init__(message=reason, exit_code=EXIT_NUMERIC, error_code=f"{module}.NO_MINIMUM")


class RegionError(FerroconnectError):
    """Evaluation region contains nodes with |Q| below one half"""
    def __init__(self, count: int):
        super().__init__(
            message=f"{count} evaluation nodes have |Q| < 1/2",
            exit_code=EXIT_NUMERIC,
            error_code="ferrosim.REGION"
        )


class WindowError(FerroconnectError):
    """Sigma window does not fit the configuration"""
    def __init__(self, sigma: float, clearance: float):
        super().__init__(
            message=f"Sigma window {sigma:.4g} exceeds the clearance {clearance:.4g}",
            exit_code=EXIT_NUMERIC,
            error_code="renorm.WINDOW"
        )


class WindingMismatchError(FerroconnectError):
    """Boundary datum and vortex configuration disagree in degree"""
    def __init__(self, datum_winding: int, config_winding: int):
        super().__init__(
            message=f"Datum winding {datum_winding} does not match configuration winding {config_winding}",
            exit_code=EXIT_NUMERIC,
            error_code="renorm.WINDING"
        )


class ConvergenceError(FerroconnectError):
    """Iterative solve did not converge"""
    def __init__(self, reason: str, error_code: str = "renorm.NOT_CONVERGED"):
        super().__init__(message=reason, exit_code=EXIT_NUMERIC, error_code=error_code)


class FeasibilityError(FerroconnectError):
    """No admissible vortex configuration to start from"""
    def __init__(self, reason: str):
        super().__init__(message=reason, exit_code=EXIT_NUMERIC, error_code="renorm.NO_FEASIBLE_START")


class IncompleteRunError(FerroconnectError):
    """Run directory lacks files needed for export"""
    def __init__(self, missing: str):
        super().__init__(
            message=f"Incomplete run: missing {missing}",
            exit_code=EXIT_USAGE,
            error_code="cli.INCOMPLETE_RUN"
        )
