# reports/management/commands/analyze.py
from reports.commands import ReportCommand
from reports.serializers import MatrixInputSerializer
from reports.services import analyze_matrix


class Command(ReportCommand):
    help = "Run the full pipeline on a matrix document and print the analysis report"

    def build_report(self, document):
        serializer = MatrixInputSerializer(data=document)
        serializer.is_valid(raise_exception=True)
        return analyze_matrix(serializer.save(), echo=document)
