"""
Domain factory for built-in shapes and domain files
"""
import json
import logging
from pathlib import Path
from typing import Callable, Dict, List

from pydantic import ValidationError

from src.core.exceptions import DomainError, UsageError
from src.core.schemas.geometry import DomainFile
from src.geom.constants import SHAPE_ALIASES
from src.geom.domain import Domain
from src.geom import shapes

logger = logging.getLogger(__name__)


class DomainFactory:
    """Factory resolving `--domain` values to domains"""

    def __init__(self):
        self._generators: Dict[str, Callable[..., Domain]] = {
            "disk": shapes.disk,
            "kidney": shapes.kidney,
            "rounded-square": shapes.rounded_square,
            "ellipse": shapes.ellipse,
        }

    def get_domain(self, spec: str, h: float = None) -> Domain:
        """Resolve `disk`, `kidney`, `ellipse:a,b`, `rounded-square` or a domain file"""
        name, _, args = spec.partition(":")
        name = SHAPE_ALIASES.get(name, name)

        if name in self._generators:
            values = self._parse_args(spec, args)
            domain = self._generators[name](*values)
            domain.h = h
            logger.debug(f"Built domain {domain}")
            return domain

        path = Path(spec)
        if path.is_file():
            return self.load_file(path, h=h)

        raise UsageError(f"unknown domain '{spec}'; expected a file or one of {self.get_supported_names()}", field="domain")

    @staticmethod
    def _parse_args(spec: str, args: str) -> List[float]:
        if not args:
            return []
        try:
            return [float(v) for v in args.split(",")]
        except ValueError:
            raise UsageError(f"cannot parse shape arguments in '{spec}'", field="domain")

    def load_file(self, path: Path, h: float = None) -> Domain:
        try:
            doc = DomainFile.model_validate(json.loads(Path(path).read_text()))
        except (json.JSONDecodeError, ValidationError) as e:
            raise UsageError(f"invalid domain file {path}: {e}", field="domain")
        try:
            return Domain(doc.vertices, name=doc.name, h=h or doc.h)
        except DomainError:
            logger.error(f"Domain file {path} failed validation")
            raise

    def get_supported_names(self) -> List[str]:
        return sorted(self._generators)


def save_domain(domain: Domain, path: Path) -> None:
    doc = DomainFile(name=domain.name, vertices=[tuple(v) for v in domain.vertices.tolist()], h=domain.h)
    Path(path).write_text(doc.model_dump_json(indent=2))


# Global factory instance
domain_factory = DomainFactory()
