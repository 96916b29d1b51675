# reports/management/commands/validate_geniso.py
from reports.commands import ReportCommand
from reports.serializers import GenIsoSerializer
from reports.services import validate_point


class Command(ReportCommand):
    help = "Check every axiom of a serialized generalized isomorphism"

    def build_report(self, document):
        serializer = GenIsoSerializer(data=document)
        serializer.is_valid(raise_exception=True)
        return validate_point(serializer.save())
