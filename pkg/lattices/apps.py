# lattices/apps.py
from django.apps import AppConfig


class LatticesConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "lattices"
    verbose_name = "Matrices and lattices over the valuation ring"
