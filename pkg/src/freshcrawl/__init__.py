"""Focused web crawler with social-stream URL injection and freshness estimation."""

__version__ = "0.1.0"
