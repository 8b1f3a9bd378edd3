from ...suites import run_verify_a5
from ..base import ReportCommand


class Command(ReportCommand):
    help = "Exhaust A_5 x A_5 for pairs whose commutator is (1 2)(3 4) and check that both fix the point 5"

    def build_report(self, options):
        return run_verify_a5(self.run_options(options))
