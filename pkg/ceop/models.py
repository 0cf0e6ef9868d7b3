import uuid
from django.db import models
from django.core.validators import MinValueValidator


class RunRecordManager(models.Manager):
    """Custom manager for benchmark runs"""

    def succeeded(self):
        """Runs that produced a solution (truncated runs included)"""
        return self.get_queryset().exclude(status=RunRecord.Status.FAILED)

    def for_batch(self, batch):
        return self.get_queryset().filter(batch=batch)


class RunRecord(models.Model):
    class Status(models.TextChoices):
        OK = "ok", "OK"
        TRUNCATED = "truncated", "Truncated"
        FAILED = "failed", "Failed"

    id = models.UUIDField(primary_key=True, default=uuid.uuid4, editable=False)
    batch = models.CharField(max_length=64, db_index=True)
    instance = models.CharField(max_length=255, db_index=True)
    algorithm = models.CharField(max_length=64)
    # unsigned 64-bit seeds do not fit a signed BIGINT
    seed = models.DecimalField(
        max_digits=20, decimal_places=0, validators=[MinValueValidator(0)]
    )
    budget = models.FloatField(null=True, blank=True)
    prize = models.FloatField(null=True, blank=True)
    cost = models.FloatField(null=True, blank=True)
    runtime_s = models.FloatField(default=0.0, validators=[MinValueValidator(0.0)])
    status = models.CharField(
        max_length=16,
        choices=Status.choices,
        default=Status.OK,
        db_index=True,
    )
    error = models.TextField(blank=True, null=True)
    created_at = models.DateTimeField(auto_now_add=True)

    objects = RunRecordManager()

    class Meta:
        db_table = "run_records"
        ordering = ["instance", "seed"]
        constraints = [
            models.CheckConstraint(
                condition=models.Q(runtime_s__gte=0), name="runtime_s_gte_0"
            )
        ]

    def __str__(self):
        return f"{self.instance} #{self.seed} ({self.algorithm}, {self.status})"

    @property
    def failed(self):
        return self.status == self.Status.FAILED
