from .app import create_app
from .registry import ModelRegistryEntry, Registry

__all__ = ["create_app", "ModelRegistryEntry", "Registry"]
__version__ = "0.1.0"
