import uuid

from django.db import models
from django.utils.translation import gettext_lazy as _


class AbstractRecordModel(models.Model):
    id = models.UUIDField(
        primary_key=True,
        default=uuid.uuid4,
        editable=False,
    )
    created_at = models.DateTimeField(auto_now_add=True)
    updated_at = models.DateTimeField(auto_now=True)

    class Meta:
        abstract = True


class BenchmarkRun(AbstractRecordModel):
    """Index entry of one `bench` batch; the trial rows stay in the CSV under ``output_dir``."""

    class AlgorithmChoices(models.TextChoices):
        ONMFL = 'onmfl', _("Randomized rounding (non-metric)")
        OMMFL = 'ommfl', _("OFL wrapper (metric)")
        OFL = 'ofl', _("Bare OFL plug-in")

    instance_hash = models.CharField(
        max_length=64,
        db_index=True,
        help_text="sha256 of the canonical instance document.",
    )
    algorithm = models.CharField(
        max_length=10,
        choices=AlgorithmChoices.choices,
    )
    ofl = models.CharField(
        max_length=32,
        blank=True,
        verbose_name="OFL plug-in",
    )
    k_max = models.PositiveIntegerField()
    n = models.PositiveIntegerField()
    m = models.PositiveIntegerField()
    seed_count = models.PositiveIntegerField()
    order_count = models.PositiveIntegerField(default=1)
    mean_ratio = models.FloatField(
        null=True,
        blank=True,
        help_text="Empty when the instance is beyond the exact oracle.",
    )
    max_ratio = models.FloatField(
        null=True,
        blank=True,
    )
    envelope = models.FloatField()
    output_dir = models.CharField(
        max_length=1024,
        blank=True,
    )

    def __str__(self):
        return f"{self.algorithm} {self.instance_hash[:12]} ({self.seed_count} seeds)"

    class Meta:
        verbose_name = _("Benchmark run")
        verbose_name_plural = _("Benchmark runs")
        ordering = ['-created_at']
