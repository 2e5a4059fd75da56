"""Inverse-square potential bound states under minimal-length deformations."""
__version__ = "0.1.0"
