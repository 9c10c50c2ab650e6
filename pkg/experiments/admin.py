from django.contrib import admin
from .models import ExperimentRecord


@admin.register(ExperimentRecord)
class ExperimentRecordAdmin(admin.ModelAdmin):
    """
    Admin configuration for the ExperimentRecord model.
    """

    list_display = ('protocol', 'adversary', 'schema_version', 'exit_ok', 'created')
    list_filter = ('protocol', 'exit_ok')
    readonly_fields = ('created',)
