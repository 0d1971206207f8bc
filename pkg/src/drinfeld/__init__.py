"""Exact finite-level models of invertible functions on the p-adic
symmetric space.

Submodules are imported explicitly (``drinfeld.padic``, ``drinfeld.building``,
``drinfeld.certify``, ...) so that importing the top-level package stays
cheap; the command-line entry point lives in ``drinfeld.cli``.
"""

__version__ = "0.1.0"
