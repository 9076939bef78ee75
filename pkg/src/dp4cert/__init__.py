"""Exact arithmetic over F_p(t) and obstruction certificates for pencils of quadrics."""

__version__ = "0.1.0"
