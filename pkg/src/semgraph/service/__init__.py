"""HTTP service wrapping the semgraph core."""

from .app import create_app

__all__ = ["create_app"]
