from django.apps import AppConfig


class SkeletonsConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'skeletons'
    verbose_name = 'Proximity skeletons'
