from django.apps import AppConfig


class CeopConfig(AppConfig):
    name = "ceop"
    verbose_name = "Close Enough Orienteering solvers"
    default_auto_field = "django.db.models.BigAutoField"
