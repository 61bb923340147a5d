"""Secure student information management service for an academy."""

__version__ = "0.1.0"
