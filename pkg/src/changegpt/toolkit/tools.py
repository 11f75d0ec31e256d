"""The eight toolkit tools.

Two are native calculations (pixel_counting, whether_change) running
directly on rasters stored in the session; the vision models behind the
other six are fixture-backed stubs that register their outputs as derived
images under the session naming protocol. Observations mix a human-readable
sentence with machine-parseable "key: value" fragments.
"""

from __future__ import annotations

from typing import Optional

from ..navigator.records import ImageRecord
from ..raster import ops
from ..raster.png import decode_change_mask, decode_label_mask
from ..raster.types import CLASS_NAMES, BadFilter, ChangeMask, LabelMask, class_index
from .arguments import (
    BadInput,
    normalize_object_class,
    parse_fraction,
    parse_key_values,
    require,
    resolve_land_cover,
)
from .registry import (
    BACKING_NATIVE,
    BACKING_STUB,
    ToolContext,
    ToolRegistry,
    ToolResult,
    ToolSpec,
)

TAG_LANDUSE = "landuse"
TAG_CHANGEMAP = "changemap"


def _resolve_image(ctx: ToolContext, reference: str) -> ImageRecord:
    record = ctx.session.get(reference)
    if record is None:
        known = ", ".join(r.filename for r in ctx.session.records()) or "none"
        raise BadInput(f"unknown image {reference!r} (registered: {known})")
    return record


def _landuse_mask(ctx: ToolContext, record: ImageRecord) -> LabelMask:
    return decode_label_mask(ctx.session.bytes_of(record.self_id))


def _change_mask(ctx: ToolContext, record: ImageRecord) -> ChangeMask:
    return decode_change_mask(ctx.session.bytes_of(record.self_id))


def _distribution_text(mask: LabelMask) -> str:
    total = mask.width * mask.height
    parts = []
    for idx, name in enumerate(CLASS_NAMES):
        count = ops.count_class_pixels(mask, idx)
        if count:
            parts.append(f"{name} {count / total * 100.0:.1f}%")
    return ", ".join(parts)


# -- deep-learning stubs -----------------------------------------------------

def binary_change_detection(ctx: ToolContext, input_text: str) -> ToolResult:
    args = parse_key_values(input_text, ("pre", "cur"))
    pre = _resolve_image(ctx, require(args, "pre"))
    cur = _resolve_image(ctx, require(args, "cur"))
    data = ctx.require_fixtures().change_mask_bytes(pre.self_id, cur.self_id)
    record = ctx.session.register_derived(pre.self_id, TAG_CHANGEMAP, data)
    observation = (
        f"change map saved as: {record.filename} ({record.width}x{record.height}). "
        "Apply pixel_counting or whether_change to it for quantitative results."
    )
    return ToolResult(observation=observation, produced_images=[record.self_id])


def semantic_segmentation(ctx: ToolContext, input_text: str) -> ToolResult:
    args = parse_key_values(input_text, ("image",))
    image = _resolve_image(ctx, require(args, "image"))
    data = ctx.require_fixtures().label_mask_bytes(image.self_id)
    record = ctx.session.register_derived(image.self_id, TAG_LANDUSE, data)
    mask = decode_label_mask(data)
    observation = (
        f"land use map saved as: {record.filename}. "
        f"class distribution: {_distribution_text(mask)}"
    )
    return ToolResult(observation=observation, produced_images=[record.self_id])


def image_captioning(ctx: ToolContext, input_text: str) -> ToolResult:
    args = parse_key_values(input_text, ("image",))
    image = _resolve_image(ctx, require(args, "image"))
    caption = ctx.require_fixtures().caption(image.self_id)
    return ToolResult(observation=f"caption for {image.filename}: {caption}")


def scene_classification(ctx: ToolContext, input_text: str) -> ToolResult:
    args = parse_key_values(input_text, ("image",))
    image = _resolve_image(ctx, require(args, "image"))
    label = ctx.require_fixtures().scene_class(image.self_id)
    return ToolResult(observation=f"scene class for {image.filename}: {label}")


def _load_detections(ctx: ToolContext, image_id: str, tool: str):
    from .fixtures import FixtureMissing

    store = ctx.require_fixtures()
    try:
        return store.detections(image_id, tool=tool)
    except FixtureMissing:
        if tool == "object_detection":
            raise
        # the counting stub shares the detector's outputs when it has none of its own
        return store.detections(image_id, tool="object_detection")


def object_detection(ctx: ToolContext, input_text: str) -> ToolResult:
    args = parse_key_values(input_text, ("image", "class"))
    image = _resolve_image(ctx, require(args, "image"))
    wanted = normalize_object_class(args["class"]) if "class" in args else None
    detections = _load_detections(ctx, image.self_id, "object_detection")
    lines = []
    for det in detections.entries:
        if det.score < ctx.min_score:
            continue
        if wanted is not None and normalize_object_class(det.class_name) != wanted:
            continue
        box = det.box
        lines.append(
            f"{det.class_name} at (x={box.x}, y={box.y}, w={box.w}, h={box.h}) score {det.score:.2f}"
        )
    header = f"detections on {image.filename}: {len(lines)}"
    return ToolResult(observation="\n".join([header] + lines) if lines else header)


def object_counting(ctx: ToolContext, input_text: str) -> ToolResult:
    args = parse_key_values(input_text, ("image", "class"))
    image = _resolve_image(ctx, require(args, "image"))
    if image.role_token == TAG_CHANGEMAP:
        if "class" in args:
            raise BadInput("class filter is not applicable to a change map")
        try:
            count = ops.count_objects(_change_mask(ctx, image))
        except BadFilter as exc:  # pragma: no cover - guarded above
            raise BadInput(str(exc)) from exc
        return ToolResult(
            observation=f"connected change regions on {image.filename}: {count}"
        )
    wanted = normalize_object_class(args["class"]) if "class" in args else None
    detections = _load_detections(ctx, image.self_id, "object_counting")
    count = 0
    for det in detections.entries:
        if det.score < ctx.min_score:
            continue
        if wanted is not None and normalize_object_class(det.class_name) != wanted:
            continue
        count += 1
    label = args.get("class", "object")
    return ToolResult(observation=f"{label} count on {image.filename}: {count}")


# -- native calculations -------------------------------------------------------

def pixel_counting(ctx: ToolContext, input_text: str) -> ToolResult:
    args = parse_key_values(input_text, ("image", "class"))
    image = _resolve_image(ctx, require(args, "image"))
    if image.role_token == TAG_CHANGEMAP:
        if "class" in args:
            raise BadInput("a change map has no land-cover classes; drop the class key")
        mask = _change_mask(ctx, image)
        count = int(ops.changed_fraction(mask) * mask.width * mask.height + 0.5)
        total = mask.width * mask.height
        return ToolResult(
            observation=f"changed pixels on {image.filename}: {count} of {total} "
            f"({count / total * 100.0:.1f}%)"
        )
    if image.role_token == TAG_LANDUSE:
        class_name = resolve_land_cover(require(args, "class"))
        mask = _landuse_mask(ctx, image)
        count = ops.count_class_pixels(mask, class_index(class_name))
        total = mask.width * mask.height
        return ToolResult(
            observation=f"{class_name} pixels: {count} ({count / total * 100.0:.1f}%)"
        )
    raise BadInput(
        f"{image.filename} is not a pixel-classified map; run semantic_segmentation "
        "or binary_change_detection first and count on the produced map"
    )


def whether_change(ctx: ToolContext, input_text: str) -> ToolResult:
    args = parse_key_values(input_text, ("image", "min_fraction"))
    image = _resolve_image(ctx, require(args, "image"))
    if image.role_token != TAG_CHANGEMAP:
        raise BadInput(
            f"{image.filename} is not a change map; run binary_change_detection first"
        )
    threshold = (
        parse_fraction(args["min_fraction"], "min_fraction")
        if "min_fraction" in args
        else ctx.min_fraction
    )
    mask = _change_mask(ctx, image)
    fraction = ops.changed_fraction(mask)
    changed = ops.whether_change(mask, threshold)
    verdict = "yes" if changed else "no"
    return ToolResult(
        observation=f"change detected: {verdict} (changed fraction {fraction * 100.0:.2f}% "
        f"vs threshold {threshold * 100.0:.2f}%)"
    )


# -- default registry -----------------------------------------------------------

def default_specs() -> list[ToolSpec]:
    return [
        ToolSpec(
            name="binary_change_detection",
            description=(
                "Detect where a scene changed between its previous and current "
                "image and produce a binary change map image."
            ),
            arg_grammar="pre=<image>, cur=<image>",
            backing=BACKING_STUB,
            handler=binary_change_detection,
        ),
        ToolSpec(
            name="image_captioning",
            description="Describe the visible content of one image in a sentence.",
            arg_grammar="image=<image>",
            backing=BACKING_STUB,
            handler=image_captioning,
        ),
        ToolSpec(
            name="scene_classification",
            description="Classify the overall scene type of one image (e.g. port, residential).",
            arg_grammar="image=<image>",
            backing=BACKING_STUB,
            handler=scene_classification,
        ),
        ToolSpec(
            name="semantic_segmentation",
            description=(
                "Produce a land use map of one image with classes background, water, "
                "barren, road, building, forest, farmland, and report the class distribution."
            ),
            arg_grammar="image=<image>",
            backing=BACKING_STUB,
            handler=semantic_segmentation,
        ),
        ToolSpec(
            name="object_detection",
            description="Detect objects (ships, planes, storage tanks, ...) in one image with boxes.",
            arg_grammar="image=<image>[, class=<object class>]",
            backing=BACKING_STUB,
            handler=object_detection,
        ),
        ToolSpec(
            name="object_counting",
            description=(
                "Count objects of a class in one image, or count connected changed "
                "regions when given a change map."
            ),
            arg_grammar="image=<image>[, class=<object class>]",
            backing=BACKING_STUB,
            handler=object_counting,
        ),
        ToolSpec(
            name="pixel_counting",
            description=(
                "Count pixels exactly: pixels of a land-cover class on a land use map, "
                "or changed pixels on a change map."
            ),
            arg_grammar="image=<land use or change map>[, class=<land-cover class>]",
            backing=BACKING_NATIVE,
            handler=pixel_counting,
        ),
        ToolSpec(
            name="whether_change",
            description="Decide from a change map whether the scene changed at all.",
            arg_grammar="image=<change map>[, min_fraction=<0..1>]",
            backing=BACKING_NATIVE,
            handler=whether_change,
        ),
    ]


def build_default_registry(
    fixtures: Optional["FixtureStore"] = None,
    min_score: float = 0.5,
    min_fraction: float = 0.0,
) -> ToolRegistry:
    from .fixtures import FixtureStore  # noqa: F811 - typing only

    registry = ToolRegistry(fixtures=fixtures, min_score=min_score, min_fraction=min_fraction)
    for spec in default_specs():
        registry.register(spec)
    return registry
