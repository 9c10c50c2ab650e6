import logging

from django.conf import settings
from django.shortcuts import get_object_or_404
from rest_framework import status
from rest_framework.response import Response
from rest_framework.views import APIView
from drf_spectacular.utils import extend_schema

from experiments.models import ExperimentRecord
from experiments.runner import run_experiment
from experiments.schema import SCHEMA_VERSION
from experiments.serializers import (
    ExperimentRecordSerializer, ExperimentSummarySerializer, RunRequestSerializer,
)
from netsim.exceptions import ConfigError

logger = logging.getLogger(__name__)


class ExperimentListView(APIView):
    """
    API view listing stored experiments and running new ones.

    - GET /experiments/: summaries of every stored experiment.
    - POST /experiments/: run the requested experiment synchronously and
      store its report.
    Responses:
    - 201: the stored experiment with its report.
    - 400: invalid request, too many runs, or no committee satisfied the
      sampling properties.
    """
    serializer_class = RunRequestSerializer

    @extend_schema(responses=ExperimentSummarySerializer(many=True))
    def get(self, request):
        records = ExperimentRecord.objects.all()
        serializer = ExperimentSummarySerializer(records, many=True)
        return Response(serializer.data, status=status.HTTP_200_OK)

    @extend_schema(request=RunRequestSerializer, responses={201: ExperimentRecordSerializer})
    def post(self, request):
        serializer = RunRequestSerializer(data=request.data)
        if not serializer.is_valid():
            return Response(serializer.errors, status=status.HTTP_400_BAD_REQUEST)

        data = serializer.validated_data
        if data['runs'] * len(data['n']) > settings.SQBA_API_MAX_RUNS:
            return Response(
                {'runs': f'at most {settings.SQBA_API_MAX_RUNS} runs per request'},
                status=status.HTTP_400_BAD_REQUEST)

        try:
            report, _, _ = run_experiment(data['plans'])
        except ConfigError as exc:
            logger.warning('experiment rejected: %s', exc)
            return Response({'config': str(exc)}, status=status.HTTP_400_BAD_REQUEST)

        record = ExperimentRecord.objects.create(
            protocol=data['protocol'],
            adversary=str(data['adversary']),
            config={'runs': data['runs'], 'plans': [plan.config.describe() for plan in data['plans']]},
            report=report,
            schema_version=SCHEMA_VERSION,
            exit_ok=report['exit_ok'],
        )
        return Response(ExperimentRecordSerializer(record).data, status=status.HTTP_201_CREATED)


class ExperimentDetailView(APIView):
    """
    API view to retrieve one stored experiment.

    Responses:
    - 200: the experiment with its full report.
    - 404: no experiment with that id.
    """
    serializer_class = ExperimentRecordSerializer

    def get(self, request, pk):
        record = get_object_or_404(ExperimentRecord, pk=pk)
        return Response(ExperimentRecordSerializer(record).data, status=status.HTTP_200_OK)
