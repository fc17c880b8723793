"""p1stab: stability algebra and metric asymptotics for split bundles on P^1."""

__version__ = "0.1.0"
