"""Image naming protocol.

Every image the agent touches is stored under a filename of the form

    {self_id}_{link_id}_{role_token}.png

where both ids are 6-char lowercase hex. The pre/cur images of a pair share
their link id; a crop or derived image's link id names its parent's self id,
which is what makes every artifact traceable back to an uploaded root. Role
tokens are "pre", "cur", "crppre", "crpcur", or a processing tag such as
"landuse" for derived outputs.

Ids are derived from image content (sha-256 prefix) so that identical inputs
name identical files across runs; collisions within a session are re-drawn
by salting.
"""

from __future__ import annotations

import hashlib
import random
import re
from typing import Optional

ID_LENGTH = 6
ID_PATTERN = re.compile(r"^[0-9a-f]{6}$")

ROLE_PRE = "pre"
ROLE_CUR = "cur"
ROLE_CROP_PRE = "crppre"
ROLE_CROP_CUR = "crpcur"
RESERVED_TOKENS = (ROLE_PRE, ROLE_CUR, ROLE_CROP_PRE, ROLE_CROP_CUR)

# Derived tags must stay parseable: lowercase alphanumerics, no underscore
# (the underscore is the field separator) and none of the reserved tokens.
TAG_PATTERN = re.compile(r"^[a-z][a-z0-9]*$")

FILENAME_PATTERN = re.compile(r"^([0-9a-f]{6})_([0-9a-f]{6})_([a-z][a-z0-9]*)\.png$")


class BadName(Exception):
    """A filename or tag that does not fit the naming grammar."""


def is_valid_id(value: str) -> bool:
    return bool(ID_PATTERN.match(value))


def validate_tag(tag: str) -> str:
    if not TAG_PATTERN.match(tag):
        raise BadName(f"tag {tag!r} must match [a-z][a-z0-9]*")
    if tag in RESERVED_TOKENS:
        raise BadName(f"tag {tag!r} collides with a reserved role token")
    return tag


def format_filename(self_id: str, link_id: str, role_token: str) -> str:
    return f"{self_id}_{link_id}_{role_token}.png"


def parse_filename(filename: str) -> tuple[str, str, str]:
    """(self_id, link_id, role_token); raises BadName on anything else."""
    match = FILENAME_PATTERN.match(filename)
    if not match:
        raise BadName(f"filename {filename!r} does not fit the naming grammar")
    return match.group(1), match.group(2), match.group(3)


def derive_id(data: bytes, taken: set[str], salt: bytes = b"") -> str:
    """Content-derived 6-hex id, re-salted until unique among `taken`."""
    attempt = 0
    while True:
        digest = hashlib.sha256(salt + data if attempt == 0 else salt + data + b":%d" % attempt)
        candidate = digest.hexdigest()[:ID_LENGTH]
        if candidate not in taken:
            return candidate
        attempt += 1


def random_id(rng: random.Random, taken: set[str]) -> str:
    """RNG-drawn 6-hex id, re-drawn on collision with `taken`."""
    while True:
        candidate = f"{rng.getrandbits(24):06x}"
        if candidate not in taken:
            return candidate


def crop_token_for(parent_token: str) -> str:
    """Role token of a crop given its parent's token."""
    if parent_token == ROLE_PRE:
        return ROLE_CROP_PRE
    if parent_token == ROLE_CUR:
        return ROLE_CROP_CUR
    raise BadName(f"only pre/cur images can be cropped, parent has role {parent_token!r}")


def reference_stem(reference: str) -> Optional[str]:
    """Normalize an image reference (id, stem, or filename) to a filename
    stem when it looks like one, else None."""
    ref = reference.strip().strip("'\"")
    if ref.endswith(".png"):
        ref = ref[: -len(".png")]
    if "/" in ref:
        ref = ref.rsplit("/", 1)[1]
    return ref or None
