from ...suites import run_suite
from ..base import ReportCommand


class Command(ReportCommand):
    help = "Run the whole acceptance battery at the default parameters"

    def build_report(self, options):
        return run_suite(self.run_options(options))
