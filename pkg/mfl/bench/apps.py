from django.apps import AppConfig


class BenchConfig(AppConfig):
    name = 'mfl.bench'
    verbose_name = "Benchmark harness"
