"""Distance of vectorial Boolean functions to affine maps."""

__version__ = "0.1.0"
