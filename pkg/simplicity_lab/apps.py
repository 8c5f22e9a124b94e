from django.apps import AppConfig


class SimplicityLabConfig(AppConfig):
    name = 'simplicity_lab'
    verbose_name = 'Simplicity Lab'
