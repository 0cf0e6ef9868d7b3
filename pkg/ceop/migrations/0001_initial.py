# Generated by Django 6.0.1 on 2026-10-16 09:14

import django.core.validators
import uuid
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name="RunRecord",
            fields=[
                (
                    "id",
                    models.UUIDField(
                        default=uuid.uuid4,
                        editable=False,
                        primary_key=True,
                        serialize=False,
                    ),
                ),
                ("batch", models.CharField(db_index=True, max_length=64)),
                ("instance", models.CharField(db_index=True, max_length=255)),
                ("algorithm", models.CharField(max_length=64)),
                (
                    "seed",
                    models.DecimalField(
                        decimal_places=0,
                        max_digits=20,
                        validators=[django.core.validators.MinValueValidator(0)],
                    ),
                ),
                ("budget", models.FloatField(blank=True, null=True)),
                ("prize", models.FloatField(blank=True, null=True)),
                ("cost", models.FloatField(blank=True, null=True)),
                (
                    "runtime_s",
                    models.FloatField(
                        default=0.0,
                        validators=[django.core.validators.MinValueValidator(0.0)],
                    ),
                ),
                (
                    "status",
                    models.CharField(
                        choices=[
                            ("ok", "OK"),
                            ("truncated", "Truncated"),
                            ("failed", "Failed"),
                        ],
                        db_index=True,
                        default="ok",
                        max_length=16,
                    ),
                ),
                ("error", models.TextField(blank=True, null=True)),
                ("created_at", models.DateTimeField(auto_now_add=True)),
            ],
            options={
                "db_table": "run_records",
                "ordering": ["instance", "seed"],
                "constraints": [
                    models.CheckConstraint(
                        condition=models.Q(("runtime_s__gte", 0)),
                        name="runtime_s_gte_0",
                    )
                ],
            },
        ),
    ]
