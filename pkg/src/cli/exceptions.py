"""
Error handlers for the command line
"""
import functools
import logging

import typer

from src.core.exceptions import EXIT_NUMERIC, FerroconnectError

logger = logging.getLogger(__name__)


def ferroconnect_error_handler(exc: FerroconnectError) -> int:
    """Known errors: log the code, return its exit status"""
    logger.error(f"{exc.error_code}: {exc.message}", extra={"error_code": exc.error_code})
    typer.echo(f"error [{exc.error_code}] {exc.message}", err=True)
    return exc.exit_code


def general_error_handler(exc: Exception) -> int:
    logger.error("Unhandled exception", exc_info=exc)
    typer.echo(f"error [internal] {exc}", err=True)
    return EXIT_NUMERIC


def handle_errors(func):
    """Wrap a command so failures become exit codes"""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except typer.Exit:
            raise
        except FerroconnectError as exc:
            raise typer.Exit(code=ferroconnect_error_handler(exc))
        except Exception as exc:
            raise typer.Exit(code=general_error_handler(exc))
    return wrapper
