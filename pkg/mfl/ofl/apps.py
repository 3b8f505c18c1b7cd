from django.apps import AppConfig


class OflConfig(AppConfig):
    name = 'mfl.ofl'
