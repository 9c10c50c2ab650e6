"""
Run seeded simulations and print (or write) a versioned report.

Exit status: 0 when every run is clean, 1 when a property was violated,
the mean decision round exceeded 1/rho or, in conditioned mode, a run
blocked or was compromised; 2 on a configuration error.
"""
import json
import logging
import os

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from experiments.aggregate import write_csv
from experiments.configfile import read_config_file
from experiments.models import ExperimentRecord
from experiments.runner import run_experiment
from experiments.schema import SCHEMA_VERSION
from experiments.serializers import RunRequestSerializer
from netsim.config import PROTOCOLS, SAMPLING_MODES, TRACE_LEVELS
from netsim.exceptions import ConfigError

logger = logging.getLogger(__name__)

VIOLATION_EXIT = 1
CONFIG_EXIT = 2

# options forwarded to RunRequestSerializer, by request key
REQUEST_OPTIONS = {
    'protocol': 'protocol', 'n': 'n', 'epsilon': 'epsilon', 'd': 'd', 'seed': 'seed',
    'runs': 'runs', 'adversary': 'adversary', 'mode': 'mode', 'round_cap': 'round_cap',
    'inputs': 'inputs', 'crypto': 'crypto', 'trace_level': 'trace_level',
    'staleness_factor': 'staleness_factor', 'max_rejections': 'max_rejections',
    'lambda': 'lam', 'W': 'W', 'B': 'B',
}


def _flatten_errors(errors, prefix=''):
    for key, value in errors.items():
        if isinstance(value, dict):
            yield from _flatten_errors(value, f'{prefix}{key}.')
        else:
            messages = value if isinstance(value, list) else [value]
            yield f'{prefix}{key}: ' + '; '.join(str(message) for message in messages)


class Command(BaseCommand):
    help = 'Run seeded agreement simulations and report property violations and costs.'

    def add_arguments(self, parser):
        parser.add_argument('--protocol', choices=PROTOCOLS)
        parser.add_argument('--n', type=int, nargs='+', help='one or more system sizes')
        parser.add_argument('--epsilon', type=float)
        parser.add_argument('--d', type=float)
        parser.add_argument('--seed', type=int)
        parser.add_argument('--runs', type=int)
        parser.add_argument('--adversary', help='NAME[:key=value,...]')
        parser.add_argument('--mode', choices=SAMPLING_MODES)
        parser.add_argument('--round-cap', type=int)
        parser.add_argument('--inputs', help='unanimous[:V] | split-2 | split-3 | random | explicit:v0,v1,...')
        parser.add_argument('--crypto')
        parser.add_argument('--trace-level', choices=TRACE_LEVELS)
        parser.add_argument('--staleness-factor', type=int)
        parser.add_argument('--max-rejections', type=int)
        parser.add_argument('--lambda', dest='lam', type=float, help='custom committee size (with --W and --B)')
        parser.add_argument('--W', type=int)
        parser.add_argument('--B', type=int)
        parser.add_argument('--config', help='KEY=VALUE file; command-line flags win')
        parser.add_argument('--out', help='report path (default: stdout)')
        parser.add_argument('--format', choices=('json', 'csv'))
        parser.add_argument('--workers', type=int)
        parser.add_argument('--traces', help='directory for per-run JSONL traces')
        parser.add_argument('--save', action='store_true', help='store the report in the database')

    def _request(self, options):
        file_values = {}
        if options['config']:
            try:
                file_values = read_config_file(options['config'])
            except ConfigError as exc:
                raise CommandError(str(exc), returncode=CONFIG_EXIT)

        request = {key: file_values[key] for key in REQUEST_OPTIONS if key in file_values}
        for key, dest in REQUEST_OPTIONS.items():
            if options.get(dest) is not None:
                request[key] = options[dest]
        if 'protocol' not in request or 'n' not in request:
            raise CommandError('--protocol and --n are required', returncode=CONFIG_EXIT)

        extras = {
            'out': options['out'] or file_values.get('out'),
            'format': options['format'] or file_values.get('format', 'json'),
            'workers': options['workers'] or file_values.get('workers', settings.SQBA_WORKERS),
        }
        if extras['format'] not in ('json', 'csv'):
            raise CommandError(f"format must be json or csv, got {extras['format']!r}", returncode=CONFIG_EXIT)
        if extras['workers'] < 1:
            raise CommandError('--workers must be >= 1', returncode=CONFIG_EXIT)
        return request, extras

    def handle(self, *args, **options):
        request, extras = self._request(options)
        serializer = RunRequestSerializer(data=request)
        if not serializer.is_valid():
            raise CommandError('invalid configuration: ' + ' | '.join(_flatten_errors(serializer.errors)),
                               returncode=CONFIG_EXIT)
        data = serializer.validated_data

        try:
            report, groups, traces = run_experiment(
                data['plans'], workers=extras['workers'], keep_traces=bool(options['traces']))
        except ConfigError as exc:
            raise CommandError(str(exc), returncode=CONFIG_EXIT)

        if options['traces']:
            os.makedirs(options['traces'], exist_ok=True)
            for (n, seed), jsonl in sorted(traces.items()):
                path = os.path.join(options['traces'], f'trace-n{n}-seed{seed}.jsonl')
                with open(path, 'w', encoding='utf-8') as handle:
                    handle.write(jsonl)

        self._emit(report, groups, extras)

        if options['save']:
            record = ExperimentRecord.objects.create(
                protocol=data['protocol'],
                adversary=str(data['adversary']),
                config={'runs': data['runs'], 'plans': [plan.config.describe() for plan in data['plans']]},
                report=report,
                schema_version=SCHEMA_VERSION,
                exit_ok=report['exit_ok'],
            )
            logger.info('stored experiment %d', record.pk)

        totals = report['totals']
        if not report['exit_ok']:
            raise CommandError(
                f"{totals['violations']} violation(s), {totals['blocked']} blocked and "
                f"{totals['compromised']} compromised run(s) out of {totals['runs']}",
                returncode=VIOLATION_EXIT)
        if extras['out']:
            self.stdout.write(self.style.SUCCESS(f"{totals['runs']} run(s), no violations"))

    def _emit(self, report, groups, extras):
        out = extras['out']
        if extras['format'] == 'csv':
            if out:
                with open(out, 'w', newline='', encoding='utf-8') as handle:
                    write_csv(handle, groups)
            else:
                write_csv(self.stdout, groups)
            return
        text = json.dumps(report, indent=2, sort_keys=True)
        if out:
            with open(out, 'w', encoding='utf-8') as handle:
                handle.write(text + '\n')
        else:
            self.stdout.write(text)
