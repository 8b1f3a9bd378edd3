import logging
import math
from typing import Optional

from django.core.management.base import BaseCommand, CommandError

from ..constructions import Params
from ..exceptions import GroupCertError, NotApplicable, ParameterError, ResourceCapError
from ..reports import FAIL, SKIPPED, Report, write_report
from ..serializers import ParamsSerializer, ReportSerializer
from ..suites import RunOptions

logger = logging.getLogger(__name__)


class ReportCommand(BaseCommand):
    """
    Shared surface of the verification commands.

    Subclasses implement `build_report(options)`. The base prints the table,
    writes `--json` and turns the report into the exit code:
    0 all pass, 1 a check failed, 2 bad parameters, 3 a resource cap.
    """

    def add_arguments(self, parser):
        parser.add_argument('--seed', type=int, default=None)
        parser.add_argument('--samples', type=int, default=None)
        parser.add_argument('--cap-enum', type=int, default=None)
        parser.add_argument('--cap-width', type=int, default=None)
        parser.add_argument('--cap-solve', type=int, default=None)
        parser.add_argument('--json', dest='json_path', default=None, metavar='PATH')
        parser.add_argument('--stable', action='store_true', help="Leave elapsed times out of the JSON report")

    def build_report(self, options) -> Report:
        raise NotImplementedError

    def handle(self, *args, **options):
        try:
            report = self.build_report(options)
        except NotApplicable as exc:
            # nothing was checked, which is not a failure
            logger.warning(f"Not applicable: {exc}")
            self.stdout.write(f"not applicable: {exc}")
            return
        except GroupCertError as exc:
            raise CommandError(str(exc), returncode=self.error_code(exc))

        report.exit_code = self.exit_code(report)
        self.stdout.write(report.table())
        if options.get('json_path'):
            data = ReportSerializer(report, context={'stable': options.get('stable', False)}).data
            write_report(data, options['json_path'])

        if report.exit_code:
            failed = [c.name for c in report.checks if c.status == FAIL]
            if failed:
                raise CommandError(f"failed checks: {', '.join(failed)}", returncode=report.exit_code)
            skipped = [c.name for c in report.checks if c.status == SKIPPED]
            raise CommandError(f"resource cap reached in: {', '.join(skipped)}", returncode=report.exit_code)

    @staticmethod
    def error_code(exc: GroupCertError) -> int:
        """2 for bad parameters, 3 for a resource cap, 1 for everything else."""
        if isinstance(exc, ParameterError):
            return ParameterError.exit_code
        if isinstance(exc, ResourceCapError):
            return ResourceCapError.exit_code
        return 1

    @staticmethod
    def exit_code(report: Report) -> int:
        if report.failed:
            return 1
        if report.count(SKIPPED):
            return ResourceCapError.exit_code
        return 0

    @staticmethod
    def run_options(options) -> RunOptions:
        return RunOptions.from_options(options)


class ParamsCommand(ReportCommand):
    """A report command that also takes the (p, q, m, n) parameter set."""

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--p', type=int, default=5)
        parser.add_argument('--q', type=int, default=2)
        parser.add_argument('--m', type=int, default=None)
        parser.add_argument('--n', type=int, default=1)

    @staticmethod
    def default_m(p: int, q: int) -> int:
        """Smallest m >= 2 coprime to p and q."""
        m = 2
        while math.gcd(m, abs(p * q) or 1) != 1:
            m += 1
        return m

    def params(self, options, default_m: Optional[int] = None) -> Params:
        data = {key: options[key] for key in ('p', 'q', 'n')}
        data['m'] = options['m']
        if data['m'] is None:
            data['m'] = default_m or self.default_m(data['p'], data['q'])
        serializer = ParamsSerializer(data=data)
        if not serializer.is_valid():
            errors = '; '.join(f"{k}: {' '.join(str(e) for e in v)}" for k, v in serializer.errors.items())
            logger.error(f"Invalid parameters {data}: {errors}")
            raise CommandError(errors, returncode=2)
        return serializer.save()
