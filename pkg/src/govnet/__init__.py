"""govnet: socio-technical networks, institutional statements, and panel
causality for incubating open-source projects."""

__version__ = "0.1.0"

__all__ = ["__version__"]
