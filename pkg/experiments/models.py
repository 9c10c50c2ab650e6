from django.db import models


class ExperimentRecord(models.Model):
    """
    A stored experiment: the request that produced it and its report.
    """

    protocol = models.CharField(max_length=20)
    adversary = models.CharField(max_length=200, default='none')
    config = models.JSONField()
    report = models.JSONField()
    schema_version = models.CharField(max_length=10)
    exit_ok = models.BooleanField(default=False)
    created = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ['-created']

    def __str__(self):
        status = 'ok' if self.exit_ok else 'violations'
        return f'{self.protocol} vs {self.adversary} ({status})'

    def total_runs(self):
        """
        Number of seeded runs behind the report.
        """
        return self.report.get('totals', {}).get('runs', 0)
