"""
Access to project settings for the algebra modules.
Falls back to built-in defaults when no Django settings are configured.
"""
import math
from typing import Any

from django.conf import settings
from django.core.exceptions import ImproperlyConfigured

DEFAULTS = {
    'ENUMERATION_CAP': 20000,
    'WIDTH_CAP': 20000,
    'SOLVE_CAP': 10000,
    'ALTERNATING_CAP': math.factorial(10),
    'DEFAULT_SEED': 42,
    'DEFAULT_SAMPLES': 1000,
}


def setting(name: str, override: Any = None) -> Any:
    """Return `override` when given, else the configured value, else the default."""
    if override is not None:
        return override
    try:
        return getattr(settings, name, DEFAULTS[name])
    except ImproperlyConfigured:
        return DEFAULTS[name]
