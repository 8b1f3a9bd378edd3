import logging

from ...suites import run_certify
from ..base import ParamsCommand

logger = logging.getLogger(__name__)

TARGETS = ('gn', 'mn', 'pn', 'duality')


class Command(ParamsCommand):
    help = (
        "Run a certificate suite: gn (V_n x| A_p perfect of width 2), mn (M_n x| G_n perfect), "
        "pn (both), duality (invariant functionals and the finite obstruction)"
    )

    def add_arguments(self, parser):
        parser.add_argument('target', choices=TARGETS)
        super().add_arguments(parser)

    def build_report(self, options):
        target = options['target']
        # G_n never reads m
        params = self.params(options, default_m=1 if target == 'gn' else None)
        logger.info(f"Certifying {target} at {params}")
        return run_certify(target, params, self.run_options(options))
