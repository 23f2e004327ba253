"""Census kernel selection: compiled extension if available, else pure Python."""

try:
    from ._census_cy import census_increment

    KERNEL = "cython"
except ImportError:  # extension not built
    from ._census_py import census_increment

    KERNEL = "python"

__all__ = ["census_increment", "KERNEL"]
