from slowapi import Limiter
from slowapi.util import get_remote_address

from .config import settings

# Routes without their own decorator fall back to the configured budget
limiter = Limiter(key_func=get_remote_address, default_limits=[settings.RATE_LIMIT])
