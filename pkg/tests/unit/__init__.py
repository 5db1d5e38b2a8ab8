"""Unit tests for readsift."""
