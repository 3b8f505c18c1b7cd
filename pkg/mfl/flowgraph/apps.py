from django.apps import AppConfig


class FlowgraphConfig(AppConfig):
    name = 'mfl.flowgraph'
