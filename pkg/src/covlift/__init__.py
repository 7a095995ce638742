"""Tools for module classification, second cohomology, covers, and
iterated lifting of epimorphisms onto finite groups."""

__version__ = "0.1.0"
