# bf/apps.py
from django.apps import AppConfig


class BfConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "bf"
    verbose_name = "Back and forth morphisms"
