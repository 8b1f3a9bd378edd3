from ...catalog import __doc__ as GRAMMAR
from ...suites import run_analyze
from ..base import ReportCommand


class Command(ReportCommand):
    help = "Print structure predicates, radicals, center, abelianization and commutator width of a finite group"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--group', required=True, metavar='SPEC', help=GRAMMAR)

    def build_report(self, options):
        return run_analyze(options['group'], self.run_options(options))
