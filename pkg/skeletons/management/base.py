"""
Shared plumbing for the skeleton management commands: configuration from
options and settings, exit codes, and run records.
"""
import logging

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError
from django.db import transaction
from django.utils import timezone

from skeletons.exceptions import (
    BetaOutOfRange, ConfigError, ResolutionTooSmall, SiteParseError, SkeletonError, UnsupportedMetric,
)
from skeletons.models import SkeletonRun
from skeletons.services.run_config import RunConfig

logger = logging.getLogger(__name__)

EXIT_VIOLATIONS = 1
EXIT_PARSE = 2
EXIT_CONFIG = 3
EXIT_BETA = 4
EXIT_OTHER = 5


def exit_code_for(exc: Exception) -> int:
    if isinstance(exc, SiteParseError):
        return EXIT_PARSE
    if isinstance(exc, (ConfigError, UnsupportedMetric, ResolutionTooSmall, ValueError)):
        return EXIT_CONFIG
    if isinstance(exc, BetaOutOfRange):
        return EXIT_BETA
    return EXIT_OTHER


class SkeletonCommand(BaseCommand):
    """Base for commands that turn service errors into exit codes."""
    command_name = ''

    def handle(self, *args, **options):
        try:
            return self.run(**options)
        except CommandError:
            raise
        except (SkeletonError, ValueError) as exc:
            code = exit_code_for(exc)
            logger.info(f"{self.command_name} failed with exit code {code}: {exc}")
            raise CommandError(str(exc), returncode=code) from exc

    def run(self, **options):
        raise NotImplementedError

    @property
    def proxiskel(self) -> dict:
        return getattr(settings, 'PROXISKEL', {})

    def build_config(self, options: dict) -> RunConfig:
        return RunConfig.from_options(self.command_name, options, self.proxiskel).validate()

    def violations(self, count: int):
        raise CommandError(f"{count} violations found", returncode=EXIT_VIOLATIONS)

    @transaction.atomic
    def save_run(self, cfg: RunConfig, status: str, site_count: int = 0, edge_count: int = 0,
                 violation_count: int = 0, report: str = '', algorithm: str = '') -> SkeletonRun:
        """Record the run in the database."""
        run = SkeletonRun.objects.create(
            command=cfg.command,
            input_path=cfg.input_path or '',
            metric=cfg.selector.label,
            beta=cfg.beta,
            variant=cfg.variant,
            algorithm=algorithm or cfg.effective_algorithm,
            site_count=site_count,
            edge_count=edge_count,
            violation_count=violation_count,
            status=status,
            report=report,
            completed_at=timezone.now(),
        )
        self.stdout.write(self.style.SUCCESS(f"Saved run {run.id}"))
        return run
