import math

from rest_framework import serializers
from sympy import isprime

from .constructions import Params
from .reports import STATUSES


class ParamsSerializer(serializers.Serializer):
    p = serializers.IntegerField(min_value=1)
    q = serializers.IntegerField(min_value=1)
    m = serializers.IntegerField(min_value=1)
    n = serializers.IntegerField(min_value=1)

    def validate_p(self, value):
        if value < 5 or not isprime(value):
            raise serializers.ValidationError("p must be a prime of at least 5")
        return value

    def validate_q(self, value):
        if not isprime(value):
            raise serializers.ValidationError("q must be prime")
        return value

    def validate(self, attrs):
        if attrs['p'] == attrs['q']:
            raise serializers.ValidationError("p and q must be distinct")
        for other in ('p', 'q'):
            if math.gcd(attrs['m'], attrs[other]) != 1:
                raise serializers.ValidationError(f"m must be coprime to {other}")
        return attrs

    def create(self, validated_data) -> Params:
        return Params(**validated_data)


class CheckSerializer(serializers.Serializer):
    name = serializers.CharField()
    status = serializers.ChoiceField(choices=STATUSES)
    details = serializers.JSONField()
    witness = serializers.JSONField(allow_null=True)
    elapsed_ms = serializers.FloatField()

    def to_representation(self, instance):
        data = super().to_representation(instance)
        if self.context.get('stable'):
            data.pop('elapsed_ms', None)
        else:
            data['elapsed_ms'] = round(data['elapsed_ms'], 3)
        return data


class ReportSerializer(serializers.Serializer):
    command = serializers.CharField()
    params = serializers.JSONField()
    checks = CheckSerializer(many=True)
    summary = serializers.DictField(child=serializers.IntegerField())
