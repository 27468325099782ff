"""Allow ``python -m harmap`` as an alias for the ``harmap`` console script."""

from .cli import entry

entry()
