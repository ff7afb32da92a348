"""Robust sufficient dimension reduction via alpha-distance covariance"""

from importlib.metadata import version, PackageNotFoundError

try:
    __version__ = version("rsdr")
except PackageNotFoundError:
    __version__ = "dev"
