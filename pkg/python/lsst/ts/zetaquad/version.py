# Generated by setuptools_scm
__all__ = ["__version__"]

__version__ = "0.1.0"
