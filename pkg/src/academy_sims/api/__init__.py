from .app import SESSION_COOKIE, CSRF_HEADER, create_app
from .routes import ROUTES, RouteSpec

__all__ = ["create_app", "ROUTES", "RouteSpec", "SESSION_COOKIE", "CSRF_HEADER"]
