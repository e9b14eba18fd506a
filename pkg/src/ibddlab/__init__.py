"""Hard-decision iterative decoding lab for product and staircase codes."""

__version__ = "0.1.0"

from . import bch, channel, de, product, sim, staircase

__all__ = ["bch", "channel", "de", "product", "sim", "staircase", "__version__"]
