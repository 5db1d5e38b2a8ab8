"""Test suite for readsift."""
