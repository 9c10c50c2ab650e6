"""
ASGI config for the sqba project.

Serves the parameter and experiment-report API.
"""

import os

from django.core.asgi import get_asgi_application

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'sqba.settings')

application = get_asgi_application()
