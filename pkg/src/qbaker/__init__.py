"""Workbench for baker-map multi-image encryption and its circuit costs."""

__version__ = "0.1.0"
