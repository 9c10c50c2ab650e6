import io

import jsonschema
from django.test import SimpleTestCase

from experiments.aggregate import CSV_COLUMNS, aggregate, build_report, round_bound, write_csv
from experiments.inputs import build_inputs
from experiments.metrics import Metrics
from experiments.runner import ExperimentPlan, execute, run_experiment, seeds_for
from experiments.schema import SCHEMA_VERSION, validate_report
from experiments.tests.helpers import small_config
from netsim.config import FAITHFUL, SEED_LIMIT, RunConfig
from params.engine import SystemParams


class RunnerTest(SimpleTestCase):
    def test_seeds_wrap(self):
        self.assertEqual(seeds_for(5, 3), (5, 6, 7))
        self.assertEqual(seeds_for(SEED_LIMIT - 1, 2), (SEED_LIMIT - 1, 0))

    def test_plan_draws_inputs_per_seed(self):
        """
        Test that an input pattern is drawn again for every seed.
        """
        base = small_config('multivalued')
        plan = ExperimentPlan(base, (1, 2), 'random')
        configs = plan.configs

        # Assert seeds and inputs follow the seed
        self.assertEqual([config.seed for config in configs], [1, 2])
        for config in configs:
            self.assertEqual(config.inputs, build_inputs('random', 'multivalued', 4, config.seed))

    def test_execute(self):
        result = execute(small_config('approver'))
        self.assertEqual(result.metrics.total_violations, 0)
        self.assertEqual(result.metrics.words_sent_by_correct, 192)
        self.assertIs(result.trace.metrics, result.metrics)

    def test_run_experiment(self):
        """
        Test a two-seed experiment end to end, traces kept.
        """
        plan = ExperimentPlan(small_config('binary'), (0, 1))
        report, groups, traces = run_experiment([plan], keep_traces=True)

        # Assert one group with both runs, in seed order
        self.assertEqual(report['totals']['runs'], 2)
        self.assertEqual(groups[0][0], plan.config)
        self.assertEqual([metrics.seed for metrics in groups[0][1]], [0, 1])
        self.assertEqual(sorted(traces), [(4, 0), (4, 1)])

        # Assert a clean report
        self.assertTrue(report['exit_ok'])
        self.assertEqual(report['groups'][0]['unanimous_round_one'], 1.0)


class AggregateTest(SimpleTestCase):
    def setUp(self):
        self.config = small_config('binary')
        self.runs = [execute(self.config.with_seed(seed)).metrics for seed in (0, 1, 2)]

    def test_section(self):
        """
        Test the report section of a clean binary experiment.
        """
        section = aggregate(self.config, self.runs)

        # Assert counts and seeds
        self.assertEqual(section['runs'], 3)
        self.assertEqual(section['seeds'], [0, 1, 2])
        self.assertEqual(section['total_violations'], 0)
        self.assertEqual(section['blocked'], 0)
        self.assertNotIn('seed', section['config'])

        # Assert the summaries
        self.assertEqual(section['decision_rounds']['max'], 1.0)
        self.assertGreater(section['words']['mean'], 0)
        self.assertEqual(set(section['fingerprints']), {'0', '1', '2'})
        self.assertTrue(section['exit_ok'])

    def test_empty(self):
        with self.assertRaises(ValueError):
            aggregate(self.config, [])

    def test_report_matches_schema(self):
        """
        Test that the built report validates, and that a damaged one does not.
        """
        report = build_report('binary', [(self.config, self.runs)])

        # Assert the report validates as built
        self.assertIs(validate_report(report), report)
        self.assertEqual(report['schema_version'], SCHEMA_VERSION)

        # Assert a missing key and a wrong version are rejected
        damaged = dict(report)
        del damaged['totals']
        with self.assertRaises(jsonschema.ValidationError):
            validate_report(damaged)
        with self.assertRaises(jsonschema.ValidationError):
            validate_report(dict(report, schema_version='0.1'))

    def test_csv(self):
        handle = io.StringIO()
        write_csv(handle, [(self.config, self.runs)])
        lines = handle.getvalue().splitlines()

        # Assert a header plus one row per run
        self.assertEqual(lines[0], ','.join(CSV_COLUMNS))
        self.assertEqual(len(lines), 4)
        self.assertTrue(lines[1].startswith(f'{SCHEMA_VERSION},binary,4,0,none,conditioned,finished,0,0,'))


class RoundBoundTest(SimpleTestCase):
    def setUp(self):
        params = SystemParams.custom(7, 7, 5, 2, f=2, epsilon=0.25, d=0.05)
        self.config = RunConfig(params=params, seed=0, protocol='binary', inputs=(1,) * 7,
                                sampling_mode=FAITHFUL)

    def _metrics(self, round):
        return Metrics(seed=0, protocol='binary', n=7, lam=7, decision_rounds={pid: round for pid in range(7)})

    def test_mean_round_gates_the_exit_status(self):
        """
        Test that a mean decision round above 1/rho fails the section.
        """
        self.assertTrue(aggregate(self.config, [self._metrics(3)])['exit_ok'])

        # Assert a slow section fails even with no property violated
        section = aggregate(self.config, [self._metrics(60)])
        self.assertEqual(section['total_violations'], 0)
        self.assertFalse(section['exit_ok'])

    def test_no_bound_without_rho(self):
        self.assertIsNone(round_bound(small_config('binary')))
        self.assertIsNone(round_bound(small_config('approver')))
