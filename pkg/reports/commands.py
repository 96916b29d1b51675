# reports/commands.py
import json
import logging

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError
from rest_framework.exceptions import ValidationError

from core.exceptions import KglError

from .models import AnalysisRun

logger = logging.getLogger(__name__)

USAGE_ERROR = 1
VALIDATION_FAILED = 2


class ReportCommand(BaseCommand):
    """
    Reads one JSON document, runs ``build_report`` on it and writes the
    report to standard output. Exit code 1 for unreadable input, 2 when
    the report records a failure (written first), 0 otherwise.
    """

    # KglError subclasses that mean "valid input, failed check" for this command
    failure_errors = ()

    def add_arguments(self, parser):
        parser.add_argument("--input", required=True, help="Path of the JSON input document")
        parser.add_argument("--json", action="store_true", default=True, help="Compact JSON output (default)")
        parser.add_argument("--pretty", action="store_true", help="Indented JSON output")
        parser.add_argument("--save", action="store_true", help="Store the run in the analysis history")

    def build_report(self, document):
        raise NotImplementedError

    def read_document(self, path):
        try:
            with open(path, encoding="utf-8") as handle:
                return json.load(handle)
        except OSError as exc:
            raise CommandError(f"cannot read {path}: {exc}", returncode=USAGE_ERROR) from exc
        except json.JSONDecodeError as exc:
            raise CommandError(f"{path} is not valid JSON: {exc}", returncode=USAGE_ERROR) from exc

    def emit(self, report, options):
        indent = settings.KGLSCOPE["PRETTY_INDENT"] if options["pretty"] else None
        self.stdout.write(json.dumps(report, indent=indent, ensure_ascii=False))

    def finish(self, document, report, passed, options):
        self.emit(report, options)
        exit_code = 0 if passed else VALIDATION_FAILED
        if options["save"]:
            run = AnalysisRun.objects.record(self.command_name, document, exit_code, report)
            logger.info(f"{self.command_name}: saved run {run.pk}")
        if not passed:
            raise CommandError(f"{self.command_name}: validation failed", returncode=VALIDATION_FAILED)

    @property
    def command_name(self):
        return self.__module__.rsplit(".", 1)[-1]

    def handle(self, *args, **options):
        document = self.read_document(options["input"])
        logger.info(f"{self.command_name}: read {options['input']}")
        try:
            report, passed = self.build_report(document)
        except ValidationError as exc:
            raise CommandError(f"invalid input: {json.dumps(exc.detail)}", returncode=USAGE_ERROR) from exc
        except self.failure_errors as exc:
            logger.warning(f"{self.command_name}: {exc}")
            report, passed = {"error": type(exc).__name__, "detail": str(exc)}, False
        except KglError as exc:
            raise CommandError(f"{type(exc).__name__}: {exc}", returncode=USAGE_ERROR) from exc
        except Exception:
            logger.error(f"{self.command_name}: unexpected failure", exc_info=True)
            raise
        self.finish(document, report, passed, options)
