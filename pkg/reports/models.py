# reports/models.py
import hashlib
import json

from django.db import models


def document_digest(document):
    """SHA-256 of the canonical JSON form of an input document."""
    canonical = json.dumps(document, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


# -------------------- AnalysisRun Manager --------------------
class AnalysisRunManager(models.Manager):
    def record(self, command, document, exit_code, report):
        """
        Store one command invocation. Identical inputs share a digest, so
        the history of a document is a filter on ``input_digest``.
        """
        run = self.model(
            command=command,
            input_digest=document_digest(document),
            exit_code=exit_code,
            report=report,
        )
        run.full_clean()
        run.save(using=self._db)
        return run

    def for_document(self, document):
        return self.filter(input_digest=document_digest(document))


# -------------------- AnalysisRun Model --------------------
class AnalysisRun(models.Model):
    COMMAND_CHOICES = [
        ("analyze", "Analyze"),
        ("validate_geniso", "Validate generalized isomorphism"),
        ("decompose", "Decompose"),
        ("selftest", "Self-test"),
    ]

    command = models.CharField(max_length=20, choices=COMMAND_CHOICES)
    input_digest = models.CharField(max_length=64, db_index=True)
    exit_code = models.PositiveSmallIntegerField(default=0)
    report = models.JSONField()
    created_at = models.DateTimeField(auto_now_add=True)

    objects = AnalysisRunManager()

    class Meta:
        ordering = ["-created_at"]

    def __str__(self):
        return f"{self.command} {self.input_digest[:12]} (exit {self.exit_code})"

    @property
    def passed(self):
        return self.exit_code == 0
