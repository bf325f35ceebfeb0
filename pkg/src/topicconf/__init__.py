"""Authorship attribution pipelines and the topic confusion evaluation task."""

__version__ = "0.1.0"
