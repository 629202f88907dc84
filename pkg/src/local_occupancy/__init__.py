"""Hard-core model tools for colouring graphs with locally sparse neighbourhoods."""

__version__ = "0.1.0"
