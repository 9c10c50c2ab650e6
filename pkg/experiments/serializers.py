import math

from django.conf import settings
from rest_framework import serializers

from adversary.strategies import build_strategy
from committee.backends import BACKENDS
from experiments.inputs import build_inputs
from experiments.models import ExperimentRecord
from experiments.runner import ExperimentPlan, seeds_for
from netsim.config import (
    CONDITIONED, PROTOCOLS, SAMPLING_MODES, SEED_LIMIT, TRACE_LEVELS, AdversarySpec, RunConfig,
)
from netsim.exceptions import ConfigError
from params.engine import SystemParams, derive_params
from params.exceptions import ParamsError

CUSTOM_KEYS = ('lambda', 'W', 'B')


class RunRequestSerializer(serializers.Serializer):
    """
    Serializer for an experiment request, shared by the API and the
    ``simulate`` command.

    ``lambda``, ``W`` and ``B`` override the derived constants for small
    hand-traceable instances; give all three or none. A valid request
    carries its ExperimentPlans (one per n) under ``plans``.
    """
    protocol = serializers.ChoiceField(choices=PROTOCOLS)
    n = serializers.ListField(child=serializers.IntegerField(min_value=1), min_length=1)
    epsilon = serializers.FloatField(default=0.25)
    d = serializers.FloatField(default=0.05)
    seed = serializers.IntegerField(min_value=0, max_value=SEED_LIMIT - 1, default=0)
    runs = serializers.IntegerField(min_value=1, default=1)
    adversary = serializers.CharField(default='none')
    mode = serializers.ChoiceField(choices=SAMPLING_MODES, default=CONDITIONED)
    round_cap = serializers.IntegerField(min_value=1, required=False)
    inputs = serializers.CharField(default='unanimous')
    crypto = serializers.ChoiceField(choices=sorted(BACKENDS), required=False)
    trace_level = serializers.ChoiceField(choices=TRACE_LEVELS, required=False)
    staleness_factor = serializers.IntegerField(min_value=1, required=False)
    max_rejections = serializers.IntegerField(min_value=0, required=False)
    W = serializers.IntegerField(min_value=1, required=False)
    B = serializers.IntegerField(min_value=0, required=False)

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # not a legal attribute name
        self.fields['lambda'] = serializers.FloatField(min_value=0, required=False)

    def validate_adversary(self, value):
        try:
            spec = AdversarySpec.parse(value)
            build_strategy(spec, 0)
        except ConfigError as exc:
            raise serializers.ValidationError(str(exc))
        return spec

    def _params_for(self, n, attrs):
        if all(key in attrs for key in CUSTOM_KEYS):
            f = max(0, math.floor((1 / 3 - attrs['epsilon']) * n))
            return SystemParams.custom(
                n, attrs['lambda'], attrs['W'], attrs['B'],
                f=f, epsilon=attrs['epsilon'], d=attrs['d'])
        return derive_params(n, attrs['epsilon'], attrs['d'])

    def validate(self, attrs):
        given = [key for key in CUSTOM_KEYS if key in attrs]
        if given and len(given) != len(CUSTOM_KEYS):
            raise serializers.ValidationError(
                {'custom': 'lambda, W and B must be given together'})

        seeds = seeds_for(attrs['seed'], attrs['runs'])
        plans = []
        for n in attrs['n']:
            try:
                params = self._params_for(n, attrs)
            except ParamsError as exc:
                raise serializers.ValidationError({'constraint': f'n={n}: {exc}'})
            try:
                config = RunConfig(
                    params=params,
                    seed=attrs['seed'],
                    protocol=attrs['protocol'],
                    inputs=build_inputs(attrs['inputs'], attrs['protocol'], n, attrs['seed']),
                    adversary=attrs['adversary'],
                    sampling_mode=attrs['mode'],
                    round_cap=attrs.get('round_cap', settings.SQBA_ROUND_CAP),
                    staleness_factor=attrs.get('staleness_factor', settings.SQBA_STALENESS_FACTOR),
                    max_rejections=attrs.get('max_rejections', settings.SQBA_MAX_REJECTIONS),
                    trace_level=attrs.get('trace_level', settings.SQBA_TRACE_LEVEL),
                    crypto=attrs.get('crypto', settings.SQBA_CRYPTO_BACKEND),
                )
            except ConfigError as exc:
                raise serializers.ValidationError({'config': f'n={n}: {exc}'})
            plans.append(ExperimentPlan(config, seeds, attrs['inputs']))
        attrs['plans'] = plans
        return attrs


class ExperimentRecordSerializer(serializers.ModelSerializer):
    """
    Serializer for a stored experiment, report included.
    """
    class Meta:
        model = ExperimentRecord
        fields = '__all__'


class ExperimentSummarySerializer(serializers.ModelSerializer):
    """
    Serializer for the experiment list: everything but the report body.
    """
    total_runs = serializers.IntegerField(read_only=True)

    class Meta:
        model = ExperimentRecord
        fields = ('id', 'protocol', 'adversary', 'schema_version', 'exit_ok', 'total_runs', 'created')
