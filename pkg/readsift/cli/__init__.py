"""CLI interface using Typer and Rich."""
