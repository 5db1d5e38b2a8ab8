"""
Test basic package installation and imports.
"""

import readsift


def test_version_exists() -> None:
    """Test that version is defined."""
    assert hasattr(readsift, "__version__")
    assert isinstance(readsift.__version__, str)
    assert readsift.__version__ == "0.1.0"


def test_author_exists() -> None:
    """Test that author is defined."""
    assert hasattr(readsift, "__author__")
    assert isinstance(readsift.__author__, str)


def test_package_imports() -> None:
    """Test that package can be imported without errors."""
    import readsift.cli.main
    import readsift.core
    import readsift.evaluation
    import readsift.genomics
    import readsift.models
    import readsift.nn
    import readsift.training
    import readsift.utils

    # Verify main CLI app exists
    assert hasattr(readsift.cli.main, "app")
    assert hasattr(readsift.cli.main, "main")
