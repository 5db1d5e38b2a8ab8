"""Integration tests for the readsift CLI."""
