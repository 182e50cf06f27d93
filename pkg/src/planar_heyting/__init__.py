"""Planar Heyting algebras: slashings, J-operators, polynomial nuclei,
the star cubes and the presheaf topos over a two-column graph."""

from .lattice_core import TwoColumnGraph, Zha, full_grid, zha_from_2cg
from .slashing import OperatorTable, Picc, Slashing, slashing_from_questions

__all__ = [
    "OperatorTable",
    "Picc",
    "Slashing",
    "TwoColumnGraph",
    "Zha",
    "full_grid",
    "slashing_from_questions",
    "zha_from_2cg",
]
