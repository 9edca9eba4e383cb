from django.db import models


class SkeletonRun(models.Model):
    """Record of one compute, validate or bench command execution."""
    COMMAND_CHOICES = [
        ('compute', 'Compute'),
        ('validate', 'Validate'),
        ('bench', 'Benchmark'),
    ]
    STATUS_CHOICES = [
        ('running', 'Running'),
        ('completed', 'Completed'),
        ('partial', 'Partial'),
        ('violations', 'Violations found'),
        ('failed', 'Failed'),
    ]
    started_at = models.DateTimeField(auto_now_add=True)
    completed_at = models.DateTimeField(null=True, blank=True)
    command = models.CharField(max_length=20, choices=COMMAND_CHOICES)
    input_path = models.CharField(max_length=500, blank=True, default='')
    metric = models.CharField(max_length=50)  # lp:<p>, l1, linf, graph or segments
    beta = models.FloatField(null=True, blank=True)
    variant = models.CharField(max_length=10, blank=True, default='')
    algorithm = models.CharField(max_length=20, blank=True, default='')
    site_count = models.IntegerField(default=0)
    edge_count = models.IntegerField(default=0)
    violation_count = models.IntegerField(default=0)
    status = models.CharField(max_length=20, default='running', choices=STATUS_CHOICES)
    report = models.TextField(blank=True, default='')

    class Meta:
        ordering = ['-started_at']

    def __str__(self):
        return f"{self.command} {self.metric} ({self.status})"


class BenchSample(models.Model):
    """One timing row of a benchmark ladder."""
    run = models.ForeignKey(SkeletonRun, on_delete=models.CASCADE, related_name='samples')
    n = models.IntegerField()
    seconds = models.FloatField()
    ratio = models.FloatField(null=True, blank=True)  # seconds / previous rung's seconds

    class Meta:
        ordering = ['run', 'n']

    def __str__(self):
        return f"n={self.n}: {self.seconds:.3f}s"
