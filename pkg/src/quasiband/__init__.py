"""Static and Floquet band structures of driven one-dimensional quantum systems."""

__version__ = "0.1.0"
