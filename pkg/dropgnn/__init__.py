"""dropgnn: dropout runs that make GNNs see past the WL test."""

__version__ = "0.1.0"
