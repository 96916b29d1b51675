# reports/management/commands/decompose.py
from core.exceptions import Inconsistent, InvalidStratumData
from reports.commands import ReportCommand
from reports.serializers import DecomposeRequestSerializer
from reports.services import decompose_point


class Command(ReportCommand):
    help = "Decompose the closed fibre of a point into flags, collineations and core"

    failure_errors = (InvalidStratumData, Inconsistent)

    def build_report(self, document):
        serializer = DecomposeRequestSerializer(data=document)
        serializer.is_valid(raise_exception=True)
        phi, I, J = serializer.save()
        return decompose_point(phi, I, J)
