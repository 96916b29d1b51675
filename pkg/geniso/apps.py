# geniso/apps.py
from django.apps import AppConfig


class GenisoConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "geniso"
    verbose_name = "Generalized isomorphisms"
