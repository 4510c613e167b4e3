"""Núcleo do cavsim: unidades, cenários, grade espectral e persistência de execuções."""

__version__ = "1.0.0"
