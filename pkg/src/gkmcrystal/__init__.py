"""Path-model crystals, Demazure crystals and Demazure characters for
generalized Kac-Moody algebras, computed with exact rational arithmetic."""

import json
from importlib import resources

from .cartan import (AssociatedDatum, BorcherdsCartanDatum, DatumError, IndexWord, Weight,
                     associated_datum, datum_from_json, dumps_datum, load_datum, ordered_index,
                     validate_datum)
from .monoid import BlockForm, MonoidWord, to_minimal_dominant_reduced
from .pathmodel import Path, e_op, f_op
from .crystal import CharacterElement, CrystalGraph, generate, tensor_decompose, branch
from .demazure import demazure_character, demazure_crystal


def fixture_path(name: str):
    return resources.files(__package__).joinpath("fixtures", f"{name}.json")


def load_fixture(name: str) -> BorcherdsCartanDatum:
    with fixture_path(name).open() as fh:
        return datum_from_json(json.load(fh))


__all__ = [
    "AssociatedDatum", "BlockForm", "BorcherdsCartanDatum", "CharacterElement", "CrystalGraph",
    "DatumError", "IndexWord", "MonoidWord", "Path", "Weight", "associated_datum", "branch",
    "datum_from_json", "demazure_character", "demazure_crystal", "dumps_datum", "e_op", "f_op",
    "fixture_path", "generate", "load_datum", "load_fixture", "ordered_index",
    "tensor_decompose", "to_minimal_dominant_reduced", "validate_datum",
]
