"""Cohomology of mod p (phi, Gamma)-modules.

Modules, series and reports are plain dicts in the JSON layout used by the
``pgm`` command line tool.
"""

from ._core import PgmError, character, cohomology, commands, h1_basis, identify, run, trivial

__all__ = ["PgmError", "character", "cohomology", "commands", "h1_basis", "identify", "run", "trivial"]
