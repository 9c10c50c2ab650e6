from rest_framework import status
from rest_framework.response import Response
from rest_framework.views import APIView
from drf_spectacular.utils import extend_schema

from params.engine import (
    common_value_bound, expected_word_complexity, intersection_margins,
)
from params.oracles import sampling_failure_table
from params.serializers import (
    ParamsQuerySerializer, SamplingRowSerializer, SystemParamsSerializer,
)


class ParamsView(APIView):
    """
    API view deriving the system constants for an (n, epsilon, d) triple.

    - GET /params/?n=256&epsilon=0.25&d=0.05
    Responses:
    - 200: derived constants, intersection margins and the per-committee
      sampling failure table.
    - 400: a constraint of the chain is violated; the error names it.
    """

    @extend_schema(parameters=[ParamsQuerySerializer])
    def get(self, request):
        query = ParamsQuerySerializer(data=request.query_params)
        if not query.is_valid():
            return Response(query.errors, status=status.HTTP_400_BAD_REQUEST)

        params = query.validated_data['params']
        s5_margin, s6_margin = intersection_margins(params)

        return Response({
            'params': SystemParamsSerializer(params).data,
            'margins': {'s5': s5_margin, 's6': s6_margin},
            'common_value_bound': common_value_bound(params.d, params.lam),
            'expected_word_complexity': expected_word_complexity(params),
            'sampling': SamplingRowSerializer(sampling_failure_table(params), many=True).data,
        }, status=status.HTTP_200_OK)
