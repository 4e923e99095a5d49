from .app import create_app
from .store import ChatStore

__all__ = ["ChatStore", "create_app"]
