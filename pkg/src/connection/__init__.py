from src.connection.base import (
    BaseConnectionSolver,
    Connection,
    ConnectionSegment,
    Endpoint,
    build_cost_table,
)
from src.connection.diagnostics import (
    MinimalityReport,
    ValidationReport,
    minimality_diagnostics,
    validate_connection,
)
from src.connection.oracle import ExhaustiveOracle, oracle_min_connection
from src.connection.solver import SubsetDPSolver, solve_min_connection

__all__ = [
    "BaseConnectionSolver",
    "Connection",
    "ConnectionSegment",
    "Endpoint",
    "build_cost_table",
    "MinimalityReport",
    "ValidationReport",
    "minimality_diagnostics",
    "validate_connection",
    "ExhaustiveOracle",
    "oracle_min_connection",
    "SubsetDPSolver",
    "solve_min_connection",
]
