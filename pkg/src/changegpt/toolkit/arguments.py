"""Action-input grammar: comma-separated key=value pairs.

Example: "image=9aa41c_be9519_landuse, class=water bodies". Keys are
trimmed and case-insensitive; land-cover class values are matched against
the 7-class vocabulary plus a synonym map.
"""

from __future__ import annotations

from typing import Optional

from ..raster.types import CLASS_NAMES


class BadInput(Exception):
    """An action input that does not parse or names an invalid value."""


LAND_COVER_SYNONYMS = {
    "water body": "water",
    "water bodies": "water",
    "waterbody": "water",
    "waterbodies": "water",
    "lake": "water",
    "river": "water",
    "bare land": "barren",
    "bare ground": "barren",
    "barren land": "barren",
    "wasteland": "barren",
    "street": "road",
    "streets": "road",
    "house": "building",
    "houses": "building",
    "tree": "forest",
    "trees": "forest",
    "woodland": "forest",
    "farm": "farmland",
    "farm land": "farmland",
    "cropland": "farmland",
    "crop land": "farmland",
    "agricultural land": "farmland",
}


def parse_key_values(text: str, allowed: tuple[str, ...]) -> dict[str, str]:
    """Parse the grammar, rejecting unknown keys and bare tokens."""
    args: dict[str, str] = {}
    text = text.strip()
    if not text:
        return args
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise BadInput(
                f"expected key=value pairs, got {part!r} "
                f"(valid keys: {', '.join(allowed)})"
            )
        key, value = part.split("=", 1)
        key = key.strip().casefold()
        if key not in allowed:
            raise BadInput(f"unknown key {key!r} (valid keys: {', '.join(allowed)})")
        args[key] = value.strip().strip("'\"")
    return args


def require(args: dict[str, str], key: str) -> str:
    if key not in args or not args[key]:
        raise BadInput(f"missing required key {key!r}")
    return args[key]


def resolve_land_cover(value: str) -> str:
    """Map free text to one of the 7 class names, or raise BadInput."""
    name = value.strip().casefold()
    if name in CLASS_NAMES:
        return name
    if name in LAND_COVER_SYNONYMS:
        return LAND_COVER_SYNONYMS[name]
    if name.endswith("s") and name[:-1] in CLASS_NAMES:
        return name[:-1]
    raise BadInput(
        f"unknown land-cover class {value!r} (classes: {', '.join(CLASS_NAMES)})"
    )


def normalize_object_class(value: str) -> str:
    """Detector classes are free text; compare them case- and
    plural-insensitively ("ships" matches "ship")."""
    name = " ".join(value.strip().casefold().split())
    if len(name) > 3 and name.endswith("s") and not name.endswith("ss"):
        name = name[:-1]
    return name


def parse_fraction(value: str, key: str) -> float:
    try:
        number = float(value.rstrip("%")) / (100.0 if value.endswith("%") else 1.0)
    except ValueError:
        raise BadInput(f"{key} must be a number in [0, 1], got {value!r}") from None
    if not 0.0 <= number <= 1.0:
        raise BadInput(f"{key} must be in [0, 1], got {number}")
    return number
