import json
import tempfile
from io import StringIO
from pathlib import Path
from unittest import mock

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, tag

from ..exceptions import NotApplicable, ParameterError, ResourceCapError, UniquenessError, VerificationFailed
from ..management.base import ParamsCommand


class CommandTestCase(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def json_path(self, name='report.json') -> str:
        return str(Path(self.tmp.name) / name)

    def run_command(self, *args, **options) -> str:
        out = StringIO()
        call_command(*args, stdout=out, **options)
        return out.getvalue()

    def exit_code(self, *args, **options) -> int:
        try:
            self.run_command(*args, **options)
        except CommandError as exc:
            return exc.returncode
        return 0


class VerifyA5Tests(CommandTestCase):
    def test_passes(self):
        path = self.json_path()
        output = self.run_command('verify_a5', '--json', path, '--stable')
        self.assertIn('a5_fixed_point_lemma', output)
        report = json.loads(Path(path).read_text())
        self.assertEqual(report['command'], 'verify_a5')
        self.assertEqual(report['summary']['failed'], 0)
        self.assertEqual(report['checks'][0]['details']['solutions'], 32)
        self.assertNotIn('elapsed_ms', report['checks'][0])

    def test_injected_fault(self):
        fault = VerificationFailed('a5_fixed_point_lemma', 'injected', witness='(1 2)')
        with mock.patch('groupcert.suites.verify_a5_fixed_point_lemma', side_effect=fault):
            with self.assertRaises(CommandError) as ctx:
                self.run_command('verify_a5')
        self.assertEqual(ctx.exception.returncode, 1)
        self.assertIn('a5_fixed_point_lemma', str(ctx.exception))

    def test_malformed_flag(self):
        from ..management.commands.verify_a5 import Command

        with self.assertRaises(SystemExit) as ctx:
            Command(stdout=StringIO(), stderr=StringIO()).run_from_argv(['manage.py', 'verify_a5', '--seed', 'x'])
        self.assertEqual(ctx.exception.code, 2)


class CertifyTests(CommandTestCase):
    def test_parameter_violations(self):
        for args in (['--q', '4'], ['--p', '5', '--q', '5'], ['--p', '7', '--q', '5', '--m', '10'], ['--n', '0']):
            with self.subTest(args=args):
                self.assertEqual(self.exit_code('certify', 'mn', *args), 2)

    def test_unknown_target(self):
        with self.assertRaises(CommandError):
            self.run_command('certify', 'everything')

    def test_default_modulus(self):
        self.assertEqual(ParamsCommand.default_m(5, 2), 3)
        self.assertEqual(ParamsCommand.default_m(5, 3), 2)
        self.assertEqual(ParamsCommand.default_m(7, 2), 3)

    def test_mn(self):
        path = self.json_path()
        self.run_command('certify', 'mn', '--p', '5', '--q', '3', '--m', '2', '--samples', '100', '--json', path)
        report = json.loads(Path(path).read_text())
        self.assertEqual(report['params'], {'p': 5, 'q': 3, 'm': 2, 'n': 1, 'seed': 42, 'samples': 100})
        self.assertEqual(report['summary']['failed'], 0)
        self.assertIn('elapsed_ms', report['checks'][0])

    def test_duality(self):
        path = self.json_path()
        self.run_command('certify', 'duality', '--n', '2', '--samples', '50', '--json', path, '--stable')
        report = json.loads(Path(path).read_text())
        self.assertEqual({c['status'] for c in report['checks']}, {'pass'})
        functional = next(c for c in report['checks'] if c['name'] == 'invariant_functional')
        self.assertEqual(functional['details']['value_on_z_n'], 1)
        self.assertEqual(functional['details']['support_size'], 5)

    def test_duality_without_room_for_an_orbit_vector(self):
        path = self.json_path()
        self.run_command('certify', 'duality', '--samples', '50', '--json', path)
        report = json.loads(Path(path).read_text())
        statuses = {c['name']: c['status'] for c in report['checks']}
        self.assertEqual(statuses['invariant_functional'], 'not-applicable')
        self.assertEqual(statuses['invariant_functional_unrestricted'], 'pass')
        self.assertEqual(statuses['no_global_invariant_functional'], 'pass')

    def test_cap_gives_exit_3(self):
        self.assertEqual(self.exit_code('certify', 'duality', '--cap-solve', '5', '--samples', '10'), 3)

    @tag('slow')
    def test_gn_reports_width_two(self):
        path = self.json_path()
        self.run_command('certify', 'gn', '--p', '5', '--q', '2', '--n', '1', '--json', path)
        report = json.loads(Path(path).read_text())
        width = next(c for c in report['checks'] if c['name'] == 'gn_exact_width')
        self.assertEqual(width['details']['width'], 2)
        self.assertEqual(report['params']['m'], 1)

    @tag('slow')
    def test_pn(self):
        self.assertEqual(self.exit_code('certify', 'pn', '--p', '5', '--q', '2', '--m', '3', '--n', '1',
                                        '--samples', '200'), 0)


class AnalyzeTests(CommandTestCase):
    def structure(self, spec: str, *extra) -> dict:
        path = self.json_path()
        self.run_command('analyze', '--group', spec, '--json', path, '--stable', *extra)
        report = json.loads(Path(path).read_text())
        return report['checks'][0]['details']

    def test_a5(self):
        facts = self.structure('a5')
        for key in ('simple', 'semisimple', 'quasisimple', 'almost_simple', 'perfect'):
            self.assertTrue(facts[key], key)
        self.assertEqual(facts['commutator_width'], 1)
        self.assertEqual(facts['abelianization'], [])

    def test_s5(self):
        facts = self.structure('s5')
        self.assertTrue(facts['almost_simple'])
        self.assertFalse(facts['perfect'])
        self.assertEqual(facts['commutator_width'], 'infinite')

    def test_subdirect(self):
        facts = self.structure('subdirect-sl25')
        self.assertFalse(facts['perfect'])
        self.assertEqual(facts['abelianization'], [2])
        self.assertEqual(facts['order'], 240)

    def test_width_above_cap(self):
        facts = self.structure('s5', '--cap-width', '10')
        self.assertIsNone(facts['commutator_width'])

    def test_bad_spec(self):
        self.assertEqual(self.exit_code('analyze', '--group', 'nonsense'), 2)
        self.assertEqual(self.exit_code('analyze', '--group', 'perm{(1 2}'), 2)

    def test_group_above_cap(self):
        path = self.json_path()
        self.assertEqual(self.exit_code('analyze', '--group', 'a(7)', '--cap-enum', '100', '--json', path), 3)
        report = json.loads(Path(path).read_text())
        self.assertEqual(report['checks'][0]['status'], 'skipped')

    def test_analysis_above_cap(self):
        self.assertEqual(self.exit_code('analyze', '--group', 's5', '--cap-enum', '50'), 3)


@tag('slow')
class SuiteTests(CommandTestCase):
    def test_suite_is_clean_and_deterministic(self):
        first, second = self.json_path('first.json'), self.json_path('second.json')
        self.run_command('suite', '--stable', '--seed', '42', '--json', first)
        self.run_command('suite', '--stable', '--seed', '42', '--json', second)
        self.assertEqual(Path(first).read_bytes(), Path(second).read_bytes())
        report = json.loads(Path(first).read_text())
        self.assertEqual(report['summary']['failed'], 0)
        self.assertEqual(report['summary']['skipped'], 0)


class ErrorCodeTests(CommandTestCase):
    target = 'groupcert.management.commands.verify_a5.Command.build_report'

    def test_error_codes(self):
        cases = [
            (ParameterError('bad degree'), 2),
            (ResourceCapError('too big', partial=0, cap=10), 3),
            (VerificationFailed('check', 'broken'), 1),
            (UniquenessError('two maximal subgroups'), 1),
        ]
        for error, expected in cases:
            with self.subTest(error=type(error).__name__):
                with mock.patch(self.target, side_effect=error):
                    self.assertEqual(self.exit_code('verify_a5'), expected)

    def test_not_applicable_exits_cleanly(self):
        with mock.patch(self.target, side_effect=NotApplicable('no orbit vector')):
            output = self.run_command('verify_a5')
        self.assertIn('not applicable', output)
