# core/urls.py
from django.contrib import admin
from django.urls import path

urlpatterns = [
    # Admin: browse the stored analysis runs
    path("admin/", admin.site.urls),
]
