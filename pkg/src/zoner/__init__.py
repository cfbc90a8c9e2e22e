"""zoner: obituary document-zoning toolkit."""

__version__ = "0.1.0"

from .zones import ZONES, Zone

__all__ = ["ZONES", "Zone", "__version__"]
