"""Service layer: pydantic schemas and the FastAPI application.

The ASGI object lives at ``heegaard.service.app.app``.
"""

from . import app, models

__all__ = ["app", "models"]
