"""
pulsetomo: bootstrap tomography of single-qubit pulse errors, with a QPT correction toolkit.
"""
from ._version import __version__  # type: ignore
