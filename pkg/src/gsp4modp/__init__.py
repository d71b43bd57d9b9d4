"""Exact mod-p representation-theory toolkit for GSp4 and small oracle groups."""

__version__ = "0.1.0"
