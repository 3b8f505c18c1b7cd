from django.apps import AppConfig


class OmmflConfig(AppConfig):
    name = 'mfl.ommfl'
    verbose_name = "Online metric multi-facility location"
