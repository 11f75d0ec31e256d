import numpy as np
import pytest

from changegpt.navigator.session import Session, TickClock
from changegpt.raster import ops
from changegpt.raster.png import encode_change_mask, encode_label_mask
from changegpt.raster.types import ChangeMask, CropRegion, Detection, DetectionSet, LabelMask
from changegpt.toolkit.arguments import (
    BadInput,
    normalize_object_class,
    parse_key_values,
    resolve_land_cover,
)
from changegpt.toolkit.fixtures import FixtureMissing, FixtureStore
from changegpt.toolkit.registry import (
    DuplicateName,
    EmptyRegistry,
    ToolRegistry,
    ToolResult,
    ToolSpec,
    UnknownTool,
)
from changegpt.toolkit.tools import build_default_registry

from fixtures_util import rgb_png

TABLE_TOOLS = [
    "binary_change_detection",
    "image_captioning",
    "scene_classification",
    "semantic_segmentation",
    "object_detection",
    "object_counting",
    "pixel_counting",
    "whether_change",
]


def dummy_spec(name="dummy", description="does nothing"):
    return ToolSpec(
        name=name,
        description=description,
        arg_grammar="none",
        backing="native",
        handler=lambda ctx, text: ToolResult(observation="ok"),
    )


class TestRegistry:
    def test_register_then_listed(self):
        registry = ToolRegistry()
        registry.register(dummy_spec("pixel_counting"))
        assert registry.names() == ["pixel_counting"]

    def test_duplicate_name_rejected(self):
        registry = ToolRegistry()
        registry.register(dummy_spec())
        with pytest.raises(DuplicateName):
            registry.register(dummy_spec())

    def test_default_registry_is_exactly_the_eight_tools(self):
        registry = build_default_registry()
        assert registry.names() == TABLE_TOOLS

    def test_render_prompt_block_and_names(self):
        registry = ToolRegistry()
        registry.register(dummy_spec("a", "first tool"))
        registry.register(dummy_spec("b", "second tool"))
        block, names = registry.render_tool_prompt()
        assert block == "a: first tool\nb: second tool"
        assert names == "a, b"

    def test_single_tool_no_trailing_comma(self):
        registry = ToolRegistry()
        registry.register(dummy_spec("only"))
        assert registry.render_tool_prompt()[1] == "only"

    def test_empty_registry_rejected(self):
        with pytest.raises(EmptyRegistry):
            ToolRegistry().render_tool_prompt()

    def test_invoke_unknown_tool(self):
        registry = build_default_registry()
        with pytest.raises(UnknownTool):
            registry.invoke(Session(), "foo", "")

    def test_frozen_registry_rejects_registration(self):
        registry = build_default_registry().freeze()
        with pytest.raises(Exception):
            registry.register(dummy_spec())

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            ToolSpec(name="has space", description="d", arg_grammar="", backing="native",
                     handler=lambda c, t: ToolResult("x"))
        with pytest.raises(ValueError):
            ToolSpec(name="ok", description="", arg_grammar="", backing="native",
                     handler=lambda c, t: ToolResult("x"))


class TestArgumentGrammar:
    def test_key_values(self):
        args = parse_key_values("image=abc123, class=water", ("image", "class"))
        assert args == {"image": "abc123", "class": "water"}

    def test_keys_trimmed_and_case_insensitive(self):
        args = parse_key_values("  Image = abc , CLASS = Water bodies ", ("image", "class"))
        assert args == {"image": "abc", "class": "Water bodies"}

    def test_unknown_key_rejected(self):
        with pytest.raises(BadInput):
            parse_key_values("imag=abc", ("image",))

    def test_bare_token_rejected(self):
        with pytest.raises(BadInput):
            parse_key_values("abc123", ("image",))

    def test_land_cover_synonyms(self):
        assert resolve_land_cover("water bodies") == "water"
        assert resolve_land_cover("Water") == "water"
        assert resolve_land_cover("buildings") == "building"
        assert resolve_land_cover("cropland") == "farmland"
        with pytest.raises(BadInput):
            resolve_land_cover("igloo")

    def test_object_class_normalization(self):
        assert normalize_object_class("Ships") == "ship"
        assert normalize_object_class("storage tanks") == "storage tank"
        assert normalize_object_class("harbor") == "harbor"


@pytest.fixture()
def staged(tmp_path):
    """Session with a registered pair plus a populated fixture store."""
    session = Session(clock=TickClock())
    pre = session.register_image(rgb_png(10, 10, seed=50), "pre")
    cur = session.register_image(rgb_png(10, 10, seed=51), "cur", pair_id=pre.link_id)

    store = FixtureStore(tmp_path / "fixtures")
    labels = np.full((10, 10), 1, dtype=np.uint8)  # all water
    store.put_label_mask(pre.self_id, encode_label_mask(LabelMask.from_array(labels)))
    changed = np.zeros((10, 10), dtype=bool)
    changed[0:2, 0:2] = True
    changed[5:7, 5:7] = True
    store.put_change_mask(pre.self_id, cur.self_id, encode_change_mask(ChangeMask.from_array(changed)))
    store.put_caption(pre.self_id, "a small harbor with boats")
    store.put_scene_class(pre.self_id, "port")
    detections = DetectionSet(
        entries=(
            Detection("ship", CropRegion(1, 1, 2, 2), 0.9),
            Detection("ship", CropRegion(5, 5, 2, 2), 0.95),
            Detection("ship", CropRegion(7, 7, 2, 2), 0.3),  # below min_score
            Detection("plane", CropRegion(3, 3, 2, 2), 0.9),
        )
    )
    store.put_detections(pre.self_id, detections)

    registry = build_default_registry(fixtures=store)
    return session, registry, pre, cur, changed, labels


class TestNativeAndStubTools:
    def test_segmentation_registers_landuse_with_parent(self, staged):
        session, registry, pre, cur, _, _ = staged
        invocation = registry.invoke(session, "semantic_segmentation", f"image={pre.filename}")
        record = session.get(invocation.produced_images[0])
        assert record.role_token == "landuse"
        assert record.link_id == pre.self_id
        assert record.filename in invocation.observation
        assert "water 100.0%" in invocation.observation

    def test_pixel_counting_agrees_with_raster_core(self, staged):
        session, registry, pre, cur, _, labels = staged
        seg = registry.invoke(session, "semantic_segmentation", f"image={pre.self_id}")
        landuse = session.get(seg.produced_images[0])
        invocation = registry.invoke(
            session, "pixel_counting", f"image={landuse.filename}, class=water bodies"
        )
        expected = ops.count_class_pixels(LabelMask.from_array(labels), 1)
        assert f"water pixels: {expected} (100.0%)" in invocation.observation

    def test_pixel_counting_requires_classified_map(self, staged):
        session, registry, pre, cur, _, _ = staged
        with pytest.raises(BadInput):
            registry.invoke(session, "pixel_counting", f"image={pre.filename}, class=water")

    def test_change_detection_then_whether_and_counting(self, staged):
        session, registry, pre, cur, changed, _ = staged
        detection = registry.invoke(
            session, "binary_change_detection", f"pre={pre.filename}, cur={cur.filename}"
        )
        changemap = session.get(detection.produced_images[0])
        assert changemap.role_token == "changemap"

        whether = registry.invoke(session, "whether_change", f"image={changemap.filename}")
        assert "change detected: yes" in whether.observation

        counted = registry.invoke(session, "pixel_counting", f"image={changemap.filename}")
        expected = int(changed.sum())
        assert f"changed pixels on {changemap.filename}: {expected} of 100" in counted.observation

        regions = registry.invoke(session, "object_counting", f"image={changemap.filename}")
        assert f"connected change regions on {changemap.filename}: 2" in regions.observation

    def test_whether_change_threshold_argument(self, staged):
        session, registry, pre, cur, _, _ = staged
        detection = registry.invoke(session, "binary_change_detection", f"pre={pre.self_id}, cur={cur.self_id}")
        changemap = detection.produced_images[0]
        # 8 of 100 pixels changed; a 10% threshold silences it
        quiet = registry.invoke(session, "whether_change", f"image={changemap}, min_fraction=0.1")
        assert "change detected: no" in quiet.observation

    def test_object_counting_with_class_filter_and_min_score(self, staged):
        session, registry, pre, cur, _, _ = staged
        invocation = registry.invoke(session, "object_counting", f"image={pre.filename}, class=ships")
        assert "ships count on" in invocation.observation
        assert invocation.observation.endswith(": 2")  # 0.3-score ship filtered out

    def test_object_detection_lists_boxes(self, staged):
        session, registry, pre, cur, _, _ = staged
        invocation = registry.invoke(session, "object_detection", f"image={pre.filename}")
        assert "detections on" in invocation.observation
        assert invocation.observation.count("ship at") == 2
        assert "plane at" in invocation.observation

    def test_captioning_and_scene_class(self, staged):
        session, registry, pre, cur, _, _ = staged
        caption = registry.invoke(session, "image_captioning", f"image={pre.filename}")
        assert "a small harbor with boats" in caption.observation
        scene = registry.invoke(session, "scene_classification", f"image={pre.filename}")
        assert "port" in scene.observation

    def test_stub_determinism(self, staged):
        session, registry, pre, cur, _, _ = staged
        first = registry.invoke(session, "image_captioning", f"image={pre.filename}")
        second = registry.invoke(session, "image_captioning", f"image={pre.filename}")
        assert first.observation == second.observation

    def test_change_detection_fixture_bytes_identical_across_calls(self, staged):
        session, registry, pre, cur, _, _ = staged
        one = registry.invoke(session, "binary_change_detection", f"pre={pre.self_id}, cur={cur.self_id}")
        two = registry.invoke(session, "binary_change_detection", f"pre={pre.self_id}, cur={cur.self_id}")
        first_map = session.bytes_of(one.produced_images[0])
        second_map = session.bytes_of(two.produced_images[0])
        assert first_map == second_map

    def test_missing_fixture(self, staged):
        session, registry, pre, cur, _, _ = staged
        with pytest.raises(FixtureMissing):
            registry.invoke(session, "semantic_segmentation", f"image={cur.filename}")

    def test_unknown_image_reference(self, staged):
        session, registry, pre, cur, _, _ = staged
        with pytest.raises(BadInput):
            registry.invoke(session, "image_captioning", "image=ffffff_ffffff_pre.png")

    def test_bad_class_value(self, staged):
        session, registry, pre, cur, _, _ = staged
        seg = registry.invoke(session, "semantic_segmentation", f"image={pre.self_id}")
        with pytest.raises(BadInput):
            registry.invoke(session, "pixel_counting", f"image={seg.produced_images[0]}, class=lava")

    def test_every_produced_image_is_in_observation_and_registry(self, staged):
        session, registry, pre, cur, _, _ = staged
        for tool, args in (
            ("binary_change_detection", f"pre={pre.self_id}, cur={cur.self_id}"),
            ("semantic_segmentation", f"image={pre.self_id}"),
        ):
            invocation = registry.invoke(session, tool, args)
            for image_id in invocation.produced_images:
                record = session.get(image_id)
                assert record is not None
                assert record.filename in invocation.observation
