import json
import os
import tempfile
from io import StringIO
from unittest import mock

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase

from experiments.aggregate import CSV_COLUMNS
from experiments.models import ExperimentRecord

SMALL = {'protocol': 'approver', 'n': [4], 'lam': 4.0, 'W': 3, 'B': 0, 'd': 0.0}


class SimulateCommandTest(TestCase):
    def test_json_report(self):
        """
        Test that a clean run prints a versioned JSON report.
        """
        out = StringIO()
        call_command('simulate', runs=2, stdout=out, **SMALL)
        report = json.loads(out.getvalue())

        # Assert the report describes both runs and no violations
        self.assertEqual(report['schema_version'], '1.0')
        self.assertEqual(report['protocol'], 'approver')
        self.assertEqual(report['totals']['runs'], 2)
        self.assertTrue(report['exit_ok'])
        self.assertEqual(report['groups'][0]['config']['params']['W'], 3)

    def test_csv(self):
        out = StringIO()
        call_command('simulate', format='csv', stdout=out, **SMALL)
        lines = out.getvalue().splitlines()
        self.assertEqual(lines[0], ','.join(CSV_COLUMNS))
        self.assertEqual(len(lines), 2)

    def test_out_and_traces(self):
        """
        Test writing the report and per-run traces to disk.
        """
        with tempfile.TemporaryDirectory() as directory:
            report_path = os.path.join(directory, 'report.json')
            traces = os.path.join(directory, 'traces')
            out = StringIO()
            call_command('simulate', out=report_path, traces=traces, seed=7, stdout=out, **SMALL)

            # Assert the report file and the trace of seed 7 exist
            with open(report_path, encoding='utf-8') as handle:
                self.assertTrue(json.load(handle)['exit_ok'])
            self.assertEqual(os.listdir(traces), ['trace-n4-seed7.jsonl'])
            self.assertIn('no violations', out.getvalue())

    def test_save(self):
        call_command('simulate', save=True, stdout=StringIO(), **SMALL)
        record = ExperimentRecord.objects.get()
        self.assertTrue(record.exit_ok)
        self.assertEqual(record.total_runs(), 1)

    def test_config_file(self):
        """
        Test that flags override values read from a config file.
        """
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'experiment.env')
            with open(path, 'w', encoding='utf-8') as handle:
                handle.write('protocol=approver\nn=4\nlambda=4\nW=3\nB=0\nd=0\nruns=5\n')
            out = StringIO()
            call_command('simulate', config=path, runs=1, stdout=out)
        self.assertEqual(json.loads(out.getvalue())['totals']['runs'], 1)

    def test_configuration_errors_exit_two(self):
        """
        Test that configuration errors exit with status 2.
        """
        cases = [
            {'protocol': 'approver', 'n': [256], 'd': 0.036},
            {'protocol': 'approver', 'n': [4], 'lam': 4.0},
            {'protocol': 'binary', 'n': [4], 'lam': 4.0, 'W': 3, 'B': 0, 'd': 0.0, 'adversary': 'flood'},
            {'protocol': 'binary', 'n': [4], 'lam': 4.0, 'W': 3, 'B': 0, 'd': 0.0, 'inputs': 'explicit:1'},
            {'n': [4]},
        ]
        for options in cases:
            with self.subTest(options=options):
                with self.assertRaises(CommandError) as raised:
                    call_command('simulate', stdout=StringIO(), **options)

                # Assert the configuration exit status
                self.assertEqual(raised.exception.returncode, 2)

    def test_violations_exit_one(self):
        report = {
            'exit_ok': False,
            'totals': {'runs': 1, 'violations': 1, 'blocked': 0, 'compromised': 0},
        }
        target = 'experiments.management.commands.simulate.run_experiment'
        with mock.patch(target, return_value=(report, [], {})):
            with self.assertRaises(CommandError) as raised:
                call_command('simulate', stdout=StringIO(), **SMALL)
        self.assertEqual(raised.exception.returncode, 1)


class ParamsCommandTest(SimpleTestCase):
    def test_json(self):
        """
        Test the derived constants for n=256, epsilon=0.25, d=0.05.
        """
        out = StringIO()
        call_command('params', n=256, json=True, stdout=out)
        result = json.loads(out.getvalue())

        # Assert the thresholds and the coin rate root
        self.assertEqual(result['params']['W'], 37)
        self.assertEqual(result['params']['B'], 12)
        self.assertAlmostEqual(result['rho_root'], 0.036165, places=4)
        self.assertEqual(len(result['sampling']), 4)

    def test_table(self):
        out = StringIO()
        call_command('params', n=1000, epsilon=0.2, stdout=out)
        self.assertIn('W=46 B=15', out.getvalue())

    def test_invalid(self):
        with self.assertRaises(CommandError) as raised:
            call_command('params', n=256, d=0.036, stdout=StringIO())
        self.assertEqual(raised.exception.returncode, 2)
