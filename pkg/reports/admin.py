from django.contrib import admin
from .models import AnalysisRun

@admin.register(AnalysisRun)
class AnalysisRunAdmin(admin.ModelAdmin):
    list_display = ['command', 'input_digest', 'exit_code', 'created_at']
    list_filter = ['command', 'exit_code', 'created_at']
    search_fields = ['input_digest']
    readonly_fields = ['report', 'created_at']
