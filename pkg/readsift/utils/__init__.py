"""Figure rendering and report exporters."""
