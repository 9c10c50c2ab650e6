import json

from django.core.management.base import BaseCommand, CommandError

from experiments.metrics import sample_committee_statistics
from params.engine import (
    coin_common_probability_bound, coin_rate_root, common_value_bound,
    expected_word_complexity, intersection_margins,
)
from params.oracles import sampling_failure_table
from params.serializers import ParamsQuerySerializer


class Command(BaseCommand):
    help = 'Derive lambda, W, B, f and rho for (n, epsilon, d) and print the committee sampling table.'

    def add_arguments(self, parser):
        parser.add_argument('--n', type=int, required=True)
        parser.add_argument('--epsilon', type=float, default=0.25)
        parser.add_argument('--d', type=float, default=0.05)
        parser.add_argument('--committee-samples', type=int, default=0,
                            help='also draw this many faithful committees and compare with the exact tails')
        parser.add_argument('--seed', type=int, default=0)
        parser.add_argument('--crypto', default='hmac')
        parser.add_argument('--json', action='store_true')

    def handle(self, *args, **options):
        query = ParamsQuerySerializer(data={key: options[key] for key in ('n', 'epsilon', 'd')})
        if not query.is_valid():
            raise CommandError(json.dumps(query.errors), returncode=2)
        params = query.validated_data['params']
        s5_margin, s6_margin = intersection_margins(params)
        c_bound = common_value_bound(params.d, params.lam)

        result = {
            'params': params.as_dict(),
            'margins': {'s5': s5_margin, 's6': s6_margin},
            'rho_root': coin_rate_root(),
            'common_value_bound': c_bound,
            'common_min_bound': coin_common_probability_bound(c_bound, params.B, params.d, params.lam),
            'expected_word_complexity': expected_word_complexity(params),
            'sampling': [row.as_dict() for row in sampling_failure_table(params)],
        }
        if options['committee_samples'] > 0:
            result['committee_samples'] = sample_committee_statistics(
                params, options['committee_samples'], options['seed'], options['crypto'])

        if options['json']:
            self.stdout.write(json.dumps(result, indent=2, sort_keys=True))
            return

        self.stdout.write(
            f"n={params.n} f={params.f} epsilon={params.epsilon} d={params.d}\n"
            f"lambda={params.lam:.3f} W={params.W} B={params.B} rho={params.rho:.6f}\n"
            f"margins: s5={s5_margin:.3f} s6={s6_margin:.3f}\n"
            f"common values c >= {c_bound:.3f}, P[min common] >= {result['common_min_bound']:.4f}\n"
            f"expected words ~ {result['expected_word_complexity']:.0f}")
        self.stdout.write('property  exact          chernoff')
        for row in result['sampling']:
            self.stdout.write(f"{row['property']:<9} {row['exact']:<14.6e} {row['chernoff']:.6e}")
        for row in result.get('committee_samples', []):
            flag = 'ok' if row['within_3se'] else 'OFF'
            self.stdout.write(
                f"{row['property']:<9} empirical={row['empirical']:.6f} "
                f"+/- {row['stderr']:.6f} exact={row['exact']:.6f} [{flag}]")
