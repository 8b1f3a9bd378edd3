import math
import os
from pathlib import Path

# Load environment variables from .env if python-dotenv is available
try:
    from dotenv import load_dotenv  # type: ignore
except Exception:
    load_dotenv = None

BASE_DIR = Path(__file__).resolve().parent.parent
if load_dotenv:
    # Only attempt to load .env when the package is present
    load_dotenv(BASE_DIR / '.env')
SECRET_KEY = os.getenv('DJANGO_SECRET_KEY', 'dev-secret-key')
DEBUG = os.getenv('DEBUG', 'false').lower() == 'true'
ALLOWED_HOSTS: list = []

INSTALLED_APPS = [
    'django.contrib.contenttypes',
    'django.contrib.auth',
    'rest_framework',
    'groupcert',
]

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': BASE_DIR / 'db.sqlite3',
    }
}

LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = True
USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

REST_FRAMEWORK = {
    'DEFAULT_RENDERER_CLASSES': ['rest_framework.renderers.JSONRenderer'],
    'UNAUTHENTICATED_USER': None,
}

LOG_LEVEL = os.getenv('LOG_LEVEL', 'WARNING').upper()

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {'format': '[{levelname}] {name}: {message}', 'style': '{'},
    },
    'handlers': {
        'console': {'class': 'logging.StreamHandler', 'formatter': 'plain'},
    },
    'loggers': {
        'groupcert': {'handlers': ['console'], 'level': LOG_LEVEL, 'propagate': False},
    },
}

# Enumeration limits - groups above these sizes are refused with a resource error
ENUMERATION_CAP = int(os.getenv('ENUMERATION_CAP', '20000'))
WIDTH_CAP = int(os.getenv('WIDTH_CAP', '20000'))
SOLVE_CAP = int(os.getenv('SOLVE_CAP', '10000'))
ALTERNATING_CAP = int(os.getenv('ALTERNATING_CAP', str(math.factorial(10))))

# Sampled checks
DEFAULT_SEED = int(os.getenv('DEFAULT_SEED', '42'))
DEFAULT_SAMPLES = int(os.getenv('DEFAULT_SAMPLES', '1000'))
