"""Executable laboratory for coherent differentiation and the PCF language with differentials."""

__version__ = "0.1.0"
