"""paydev: predict paid vs volunteer contributors from commit metadata."""

__version__ = "0.1.0"
