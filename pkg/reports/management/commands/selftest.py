# reports/management/commands/selftest.py
import json

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from reports.commands import VALIDATION_FAILED
from reports.models import AnalysisRun
from reports.selftest import PROPERTIES, run_suite


class Command(BaseCommand):
    help = "Run the seeded property suite; exit 0 iff every property holds"

    def add_arguments(self, parser):
        config = settings.KGLSCOPE
        parser.add_argument("--seed", type=int, default=config["SELFTEST_SEED"])
        parser.add_argument("--count", type=int, default=config["SELFTEST_COUNT"], help="Instances per property")
        parser.add_argument(
            "--only", action="append", choices=[name for name, _, _ in PROPERTIES],
            help="Run only this property (repeatable)",
        )
        parser.add_argument("--json", action="store_true", default=True)
        parser.add_argument("--pretty", action="store_true")
        parser.add_argument("--save", action="store_true")

    def handle(self, *args, **options):
        config = settings.KGLSCOPE
        seed, count = options["seed"], options["count"]
        if count < 1:
            raise CommandError("--count must be positive", returncode=1)

        results = run_suite(
            seed,
            count,
            only=options["only"],
            max_degree=config["MAX_DEGREE"],
            coeff_range=config["COEFF_RANGE"],
            max_dimension=config["MAX_DIMENSION"],
        )
        passed = all(result.passed for result in results)
        summary = {
            "seed": seed,
            "count": count,
            "passed": passed,
            "properties": [result.as_dict() for result in results],
        }
        indent = config["PRETTY_INDENT"] if options["pretty"] else None
        self.stdout.write(json.dumps(summary, indent=indent))
        # timings on stderr only
        for result in results:
            style = self.style.SUCCESS if result.passed else self.style.ERROR
            self.stderr.write(style(
                f"{result.name}: checked={result.checked} skipped={result.skipped} "
                f"failed={len(result.failures)} time={result.seconds:.2f}s"
            ))

        exit_code = 0 if passed else VALIDATION_FAILED
        if options["save"]:
            AnalysisRun.objects.record("selftest", {"seed": seed, "count": count}, exit_code, summary)
        if not passed:
            raise CommandError("selftest: some properties failed", returncode=VALIDATION_FAILED)
