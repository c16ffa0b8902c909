from .rate_limiter import limiter
from .config import settings
