from django.apps import AppConfig


class CoreConfig(AppConfig):
    name = 'mfl.core'
    verbose_name = "Instances and solutions"
