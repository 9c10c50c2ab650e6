from rest_framework import serializers

from params.engine import derive_params
from params.exceptions import ParamsError


class ParamsQuerySerializer(serializers.Serializer):
    """
    Serializer for an (n, epsilon, d) triple.

    Validation runs the full constraint chain, so ``validated_data`` carries
    the derived SystemParams under ``params``.
    """
    n = serializers.IntegerField(min_value=2)
    epsilon = serializers.FloatField()
    d = serializers.FloatField()

    def validate(self, attrs):
        try:
            attrs['params'] = derive_params(attrs['n'], attrs['epsilon'], attrs['d'])
        except ParamsError as exc:
            raise serializers.ValidationError({'constraint': str(exc)})
        return attrs


class SystemParamsSerializer(serializers.Serializer):
    """
    Read-only representation of SystemParams.
    """
    n = serializers.IntegerField()
    f = serializers.IntegerField()
    epsilon = serializers.FloatField()
    d = serializers.FloatField()
    lam = serializers.FloatField()
    W = serializers.IntegerField()
    B = serializers.IntegerField()
    rho = serializers.FloatField()

    def to_representation(self, instance):
        data = super().to_representation(instance)
        data['lambda'] = data.pop('lam')
        return data


class SamplingRowSerializer(serializers.Serializer):
    prop = serializers.CharField()
    description = serializers.CharField()
    exact = serializers.FloatField()
    chernoff = serializers.FloatField()
