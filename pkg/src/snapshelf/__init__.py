"""snapshelf: local-first screenshot bookmarks for cross-application resources."""

__version__ = "0.1.0"
