"""chanmetric package initialization."""

from importlib.metadata import PackageNotFoundError, version

from .metrization import metrize
from .orders import Channel, DistanceMatrix, matched, weak_order

__all__ = ["Channel", "DistanceMatrix", "__version__", "matched", "metrize", "weak_order"]

try:
    __version__ = version("chanmetric")
except PackageNotFoundError:  # pragma: no cover
    __version__ = "0.1.0"
