"""
WSGI config for the sqba project.

Serves the parameter and experiment-report API.
"""

import os

from django.core.wsgi import get_wsgi_application

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'sqba.settings')

application = get_wsgi_application()
