"""DHC: deep hierarchical classification over a layered category tree."""
import sys

from . import cli
from .utils.logging import setup_logging

logger = setup_logging(__name__)

__version__ = "0.1.0"


def main():
    """Main entry point for the package."""
    try:
        sys.exit(cli.run())
    except KeyboardInterrupt:
        logger.info("Interrupted")
        sys.exit(130)
    except Exception as e:
        logger.error(f"Unexpected error: {str(e)}")
        raise

# Expose key components at package level
__all__ = ['__version__', 'cli', 'main']
