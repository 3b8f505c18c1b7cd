from django.apps import AppConfig


class OnmflConfig(AppConfig):
    name = 'mfl.onmfl'
    verbose_name = "Online non-metric multi-facility location"
