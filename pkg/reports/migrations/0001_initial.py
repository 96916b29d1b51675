# Generated by Django 5.2.10 on 2026-10-17 09:12

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name="AnalysisRun",
            fields=[
                (
                    "id",
                    models.BigAutoField(
                        auto_created=True,
                        primary_key=True,
                        serialize=False,
                        verbose_name="ID",
                    ),
                ),
                (
                    "command",
                    models.CharField(
                        choices=[
                            ("analyze", "Analyze"),
                            ("validate_geniso", "Validate generalized isomorphism"),
                            ("decompose", "Decompose"),
                            ("selftest", "Self-test"),
                        ],
                        max_length=20,
                    ),
                ),
                ("input_digest", models.CharField(db_index=True, max_length=64)),
                ("exit_code", models.PositiveSmallIntegerField(default=0)),
                ("report", models.JSONField()),
                ("created_at", models.DateTimeField(auto_now_add=True)),
            ],
            options={
                "ordering": ["-created_at"],
            },
        ),
    ]
