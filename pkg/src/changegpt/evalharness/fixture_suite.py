"""Builder for the reproducible demo/eval suite.

Generates, fully deterministically, a directory with:

    dataset.jsonl    20 questions spanning every (type, subtype) cell
    images/          synthetic 40x40 pre/cur PNG pairs
    fixtures/        stub artifacts keyed by the ids a staged session mints
    scripts/         per-question completion scripts whose pipelines match
                     each question's required tools exactly
    fault/           an 8-question variant suite whose scripts are broken
                     on purpose, one pair per error class

Reference answers are not invented: every number is computed from the
constructed label arrays with the raster operations, then frozen into the
dataset. Image ids are content-derived, so the scripts can name the exact
files a fresh session will create when the suite is replayed.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional, Union

import json

import numpy as np

from ..navigator.records import ImageRecord
from ..navigator.session import Session, TickClock
from ..raster import ops
from ..raster.png import encode_change_mask, encode_label_mask, render_label_mask_rgb
from ..raster.types import ChangeMask, CropRegion, Detection, DetectionSet, LabelMask, class_index
from ..toolkit.fixtures import FixtureStore
from ..toolkit.tools import TAG_CHANGEMAP, TAG_LANDUSE
from .dataset import CropSpec, Question, save_dataset
from .judge import AnswerSpec, boolean, categorical, checklist, numeric
from .runner import stage_session

SIZE = 40  # all suite scenes are 40x40

BG = class_index("background")
WATER = class_index("water")
BARREN = class_index("barren")
ROAD = class_index("road")
BUILDING = class_index("building")
FOREST = class_index("forest")
FARMLAND = class_index("farmland")

PCT_TOL = 0.01  # 1% relative tolerance on percentage answers


def _blank(class_idx: int) -> np.ndarray:
    return np.full((SIZE, SIZE), class_idx, dtype=np.uint8)


def _block(arr: np.ndarray, x: int, y: int, w: int, h: int, class_idx: int) -> np.ndarray:
    out = arr.copy()
    out[y : y + h, x : x + w] = class_idx
    return out


def _boxes(class_name: str, count: int, score: float = 0.9) -> list[Detection]:
    return [
        Detection(class_name, CropRegion(2 + 4 * i, 2 + (i % 3), 3, 3), score)
        for i in range(count)
    ]


def _action(thought: str, tool: str, input_text: str) -> str:
    return f"Thought: {thought}\nAction: {tool}\nAction Input: {input_text}"


def _final(answer: str) -> str:
    return f"Thought: I now know the final answer\nFinal Answer: {answer}"


class SuiteBuilder:
    def __init__(self, out_dir: Union[str, Path]) -> None:
        self.out = Path(out_dir)
        self.images_dir = self.out / "images"
        self.scripts_dir = self.out / "scripts"
        self.store = FixtureStore(self.out / "fixtures")
        self.questions: list[Question] = []
        self._png_seen: dict[bytes, str] = {}
        for directory in (self.images_dir, self.scripts_dir):
            directory.mkdir(parents=True, exist_ok=True)

    # -- plumbing -----------------------------------------------------------

    def _write_image(self, name: str, labels: np.ndarray) -> bytes:
        data = render_label_mask_rgb(LabelMask.from_array(labels))
        if data in self._png_seen and self._png_seen[data] != name:
            raise AssertionError(
                f"scene for {name} renders identically to {self._png_seen[data]}; "
                "scenes must stay distinct so fixture keys cannot clash"
            )
        self._png_seen[data] = name
        (self.images_dir / name).write_bytes(data)
        return data

    def _stage(
        self, qid: str, pre_labels: np.ndarray, cur_labels: np.ndarray, crop: Optional[CropSpec]
    ) -> tuple[Session, ImageRecord, ImageRecord, list[ImageRecord]]:
        pre_png = self._write_image(f"{qid}_pre.png", pre_labels)
        cur_png = self._write_image(f"{qid}_cur.png", cur_labels)
        session = Session(clock=TickClock())
        pre, cur, crops = stage_session(session, pre_png, cur_png, crop)
        return session, pre, cur, crops

    def _seg(self, session: Session, image: ImageRecord, labels: np.ndarray) -> ImageRecord:
        """Write a segmentation fixture for `image` and pre-register the
        derived record exactly as the stub will during the replay."""
        data = encode_label_mask(LabelMask.from_array(labels))
        self.store.put_label_mask(image.self_id, data)
        return session.register_derived(image.self_id, TAG_LANDUSE, data)

    def _cd(
        self, session: Session, pre: ImageRecord, cur: ImageRecord, changed: np.ndarray
    ) -> ImageRecord:
        data = encode_change_mask(ChangeMask.from_array(changed))
        self.store.put_change_mask(pre.self_id, cur.self_id, data)
        return session.register_derived(pre.self_id, TAG_CHANGEMAP, data)

    def _detections(self, image: ImageRecord, entries: list[Detection]) -> None:
        self.store.put_detections(image.self_id, DetectionSet(entries=tuple(entries)))

    def _emit(
        self,
        qid: str,
        qtype: str,
        subtype: str,
        text: str,
        required: list[str],
        reference: AnswerSpec,
        script: list[str],
        crop: Optional[CropSpec] = None,
    ) -> None:
        (self.scripts_dir / f"{qid}.json").write_text(json.dumps(script, indent=2))
        self.questions.append(
            Question(
                id=qid,
                qtype=qtype,
                subtype=subtype,
                text=text,
                pre_image=f"images/{qid}_pre.png",
                cur_image=f"images/{qid}_cur.png",
                required_tools=tuple(required),
                reference=reference,
                crop=crop,
            )
        )

    # -- question families ----------------------------------------------------

    def whether_question(
        self, qid: str, pre_labels: np.ndarray, cur_labels: np.ndarray, use_whether_tool: bool
    ) -> None:
        session, pre, cur, _ = self._stage(qid, pre_labels, cur_labels, None)
        changed = pre_labels != cur_labels
        changemap = self._cd(session, pre, cur, changed)
        has_change = ops.whether_change(ChangeMask.from_array(changed))

        script = [
            _action(
                "I need a change map of the pair to judge whether anything changed.",
                "binary_change_detection",
                f"pre={pre.filename}, cur={cur.filename}",
            )
        ]
        required = ["binary_change_detection"]
        if use_whether_tool:
            script.append(
                _action(
                    "Now I check the change map against the threshold.",
                    "whether_change",
                    f"image={changemap.filename}",
                )
            )
            required.append("whether_change")
        verdict = "Yes" if has_change else "No"
        script.append(
            _final(f"{verdict}, there is a discernible difference between the two images.")
        )
        self._emit(
            qid,
            "Whether",
            "/",
            "Is there a discernible difference between the images indicating changes?",
            required,
            boolean(has_change),
            script,
        )

    def size_basic_question(
        self,
        qid: str,
        pre_labels: np.ndarray,
        cur_labels: np.ndarray,
        crop: Optional[CropSpec] = None,
    ) -> None:
        session, pre, cur, crops = self._stage(qid, pre_labels, cur_labels, crop)
        if crop is not None:
            region = crop.region
            window = (slice(region.y, region.y + region.h), slice(region.x, region.x + region.w))
            changed = (pre_labels != cur_labels)[window]
            cd_pre, cd_cur = crops[0], crops[1]  # crppre, crpcur
            scope = "the cropped area"
            text = "In the localized area I have cropped, what percentage of the area has undergone changes?"
            subtype = "Local Area"
        else:
            changed = pre_labels != cur_labels
            cd_pre, cd_cur = pre, cur
            scope = "the total image size"
            text = "Estimate the percentage of the changed area relative to the total image size."
            subtype = "Basic"
        changemap = self._cd(session, cd_pre, cd_cur, changed)
        pct = ops.changed_fraction(ChangeMask.from_array(changed)) * 100.0

        script = [
            _action(
                "First produce a change map of the relevant pair.",
                "binary_change_detection",
                f"pre={cd_pre.filename}, cur={cd_cur.filename}",
            ),
            _action(
                "Count the changed pixels on the change map for an exact percentage.",
                "pixel_counting",
                f"image={changemap.filename}",
            ),
            _final(f"About {pct:.1f}% of {scope} has undergone changes."),
        ]
        self._emit(
            qid,
            "Size",
            subtype,
            text,
            ["binary_change_detection", "pixel_counting"],
            numeric(round(pct, 1), PCT_TOL),
            script,
            crop=crop,
        )

    def size_certain_class_question(
        self, qid: str, pre_labels: np.ndarray, cur_labels: np.ndarray, class_name: str
    ) -> None:
        session, pre, cur, _ = self._stage(qid, pre_labels, cur_labels, None)
        landuse_pre = self._seg(session, pre, pre_labels)
        landuse_cur = self._seg(session, cur, cur_labels)
        delta = ops.class_size_delta(
            LabelMask.from_array(pre_labels), LabelMask.from_array(cur_labels), class_index(class_name)
        )
        pct = float(delta.pct_change)
        direction = "increased" if pct >= 0 else "decreased"

        script = [
            _action(
                "Segment the previous image to locate the class.",
                "semantic_segmentation",
                f"image={pre.filename}",
            ),
            _action(
                "Segment the current image the same way.",
                "semantic_segmentation",
                f"image={cur.filename}",
            ),
            _action(
                f"Count {class_name} pixels on the previous land use map.",
                "pixel_counting",
                f"image={landuse_pre.filename}, class={class_name}",
            ),
            _action(
                f"Count {class_name} pixels on the current land use map.",
                "pixel_counting",
                f"image={landuse_cur.filename}, class={class_name}",
            ),
            _final(
                f"The {class_name} area has {direction} by {abs(pct):.1f}% "
                f"(from {delta.pre_count} to {delta.cur_count} pixels)."
            ),
        ]
        self._emit(
            qid,
            "Size",
            "Certain Class",
            f"What proportion of the {class_name} has increased or decreased in size, "
            "expressed as a percentage?",
            ["semantic_segmentation", "semantic_segmentation", "pixel_counting", "pixel_counting"],
            checklist(categorical(direction), numeric(round(abs(pct), 1), PCT_TOL)),
            script,
        )

    def size_analysis_question(
        self,
        qid: str,
        pre_labels: np.ndarray,
        cur_labels: np.ndarray,
        growing: tuple[str, str],
        shrinking: str,
        theme: str,
    ) -> None:
        session, pre, cur, _ = self._stage(qid, pre_labels, cur_labels, None)
        landuse_pre = self._seg(session, pre, pre_labels)
        landuse_cur = self._seg(session, cur, cur_labels)
        pre_mask = LabelMask.from_array(pre_labels)
        cur_mask = LabelMask.from_array(cur_labels)

        script = [
            _action("Segment the previous image.", "semantic_segmentation", f"image={pre.filename}"),
            _action("Segment the current image.", "semantic_segmentation", f"image={cur.filename}"),
        ]
        stats = {}
        for class_name in (*growing, shrinking):
            idx = class_index(class_name)
            stats[class_name] = (
                ops.count_class_pixels(pre_mask, idx),
                ops.count_class_pixels(cur_mask, idx),
            )
            for phase, record in (("previous", landuse_pre), ("current", landuse_cur)):
                script.append(
                    _action(
                        f"Count {class_name} pixels on the {phase} land use map.",
                        "pixel_counting",
                        f"image={record.filename}, class={class_name}",
                    )
                )

        a, b = growing
        answer = (
            f"{theme}: {a} grew from {stats[a][0]} to {stats[a][1]} pixels and "
            f"{b} from {stats[b][0]} to {stats[b][1]}, while {shrinking} shrank from "
            f"{stats[shrinking][0]} to {stats[shrinking][1]} pixels. The expansion of "
            f"{a} and {b} at the expense of {shrinking} indicates ongoing conversion."
        )
        script.append(_final(answer))
        self._emit(
            qid,
            "Size",
            "Analysis",
            f"Compare the pixel changes in {a.title()} and {b.title()} to "
            f"{shrinking.title()}, and quantify the shift to assess the trend.",
            ["semantic_segmentation", "semantic_segmentation"] + ["pixel_counting"] * 6,
            checklist(
                categorical(a), categorical(b), categorical(shrinking), categorical("grew", "increase", "expan")
            ),
            script,
        )

    def number_question(
        self,
        qid: str,
        pre_labels: np.ndarray,
        cur_labels: np.ndarray,
        object_class: str,
        pre_count: int,
        cur_count: int,
        crop: Optional[CropSpec] = None,
    ) -> None:
        session, pre, cur, crops = self._stage(qid, pre_labels, cur_labels, crop)
        if crop is not None:
            target_pre, target_cur = crops[0], crops[1]
            scope = "the cropped area"
            subtype = "Local Area"
            text = (
                f"For the cropped area, can you calculate the change in the number of "
                f"{object_class}s between the two images?"
            )
        else:
            target_pre, target_cur = pre, cur
            scope = "the two images"
            subtype = "Basic"
            text = (
                f"Between the previous and current images, has there been an increase or "
                f"decrease in the number of {object_class}s?"
            )
        self._detections(target_pre, _boxes(object_class, pre_count))
        self._detections(target_cur, _boxes(object_class, cur_count))
        direction = "increased" if cur_count > pre_count else "decreased"

        script = [
            _action(
                f"Count {object_class}s on the previous image.",
                "object_counting",
                f"image={target_pre.filename}, class={object_class}",
            ),
            _action(
                f"Count {object_class}s on the current image.",
                "object_counting",
                f"image={target_cur.filename}, class={object_class}",
            ),
        ]
        if subtype == "Local Area":
            delta = abs(cur_count - pre_count)
            answer = (
                f"The number of {object_class}s in {scope} {direction} by {delta} "
                f"(from {pre_count} to {cur_count})."
            )
            reference = checklist(categorical(direction), numeric(float(delta), 0.0))
        else:
            answer = (
                f"The number of {object_class}s {direction} between {scope} "
                f"(from {pre_count} to {cur_count})."
            )
            reference = categorical(direction)
        script.append(_final(answer))
        self._emit(
            qid,
            "Number",
            subtype,
            text,
            ["object_counting", "object_counting"],
            reference,
            script,
            crop=crop,
        )

    def number_comparison_question(
        self,
        qid: str,
        pre_labels: np.ndarray,
        cur_labels: np.ndarray,
        class_a: str,
        counts_a: tuple[int, int],
        class_b: str,
        counts_b: tuple[int, int],
    ) -> None:
        session, pre, cur, _ = self._stage(qid, pre_labels, cur_labels, None)
        self._detections(pre, _boxes(class_a, counts_a[0]) + _boxes(class_b, counts_b[0]))
        self._detections(cur, _boxes(class_a, counts_a[1]) + _boxes(class_b, counts_b[1]))
        delta_a = abs(counts_a[1] - counts_a[0])
        delta_b = abs(counts_b[1] - counts_b[0])
        winner = class_a if delta_a > delta_b else class_b

        script = []
        for class_name, (image, phase) in (
            (class_a, (pre, "previous")),
            (class_a, (cur, "current")),
            (class_b, (pre, "previous")),
            (class_b, (cur, "current")),
        ):
            script.append(
                _action(
                    f"Count {class_name}s on the {phase} image.",
                    "object_counting",
                    f"image={image.filename}, class={class_name}",
                )
            )
        script.append(
            _final(
                f"The {winner} category experienced the greater change in number: "
                f"{class_a}s changed by {delta_a} (from {counts_a[0]} to {counts_a[1]}) and "
                f"{class_b}s by {delta_b} (from {counts_b[0]} to {counts_b[1]})."
            )
        )
        self._emit(
            qid,
            "Number",
            "Comparison",
            f"Compare the change in the number of {class_a}s to the change in the number "
            f"of {class_b}s between the previous and current images and determine which "
            "category experienced a greater change in number?",
            ["object_counting"] * 4,
            categorical(winner),
            script,
        )

    def class_whole_image_question(
        self, qid: str, pre_labels: np.ndarray, cur_labels: np.ndarray
    ) -> None:
        session, pre, cur, _ = self._stage(qid, pre_labels, cur_labels, None)
        self._seg(session, pre, pre_labels)
        self._seg(session, cur, cur_labels)
        from ..raster.types import CLASS_NAMES

        before = CLASS_NAMES[ops.dominant_class(LabelMask.from_array(pre_labels))]
        after = CLASS_NAMES[ops.dominant_class(LabelMask.from_array(cur_labels))]

        script = [
            _action("Segment the previous image to read its dominant class.", "semantic_segmentation", f"image={pre.filename}"),
            _action("Segment the current image the same way.", "semantic_segmentation", f"image={cur.filename}"),
            _final(
                f"The previous image was predominantly {before}; the area now belongs to "
                f"the {after} class."
            ),
        ]
        self._emit(
            qid,
            "Class",
            "Whole Image",
            "What class covered the entire area of the previous image, and to what class "
            "does the entire area belong now?",
            ["semantic_segmentation", "semantic_segmentation"],
            checklist(categorical(before), categorical(after)),
            script,
        )

    def class_local_area_question(
        self,
        qid: str,
        pre_labels: np.ndarray,
        cur_labels: np.ndarray,
        crop: CropSpec,
    ) -> None:
        session, pre, cur, crops = self._stage(qid, pre_labels, cur_labels, crop)
        target = crops[0]
        labels = pre_labels if crop.parent == "pre" else cur_labels
        region = crop.region
        window = labels[region.y : region.y + region.h, region.x : region.x + region.w]
        self._seg(session, target, window)
        from ..raster.types import CLASS_NAMES

        answer_class = CLASS_NAMES[ops.dominant_class(LabelMask.from_array(window))]
        tense = "was" if crop.parent == "pre" else "is"
        phase = "before the change occurred" if crop.parent == "pre" else "now"

        script = [
            _action(
                "Segment the cropped area to read its class.",
                "semantic_segmentation",
                f"image={target.filename}",
            ),
            _final(f"The cropped area {tense} {answer_class} {phase}."),
        ]
        self._emit(
            qid,
            "Class",
            "Local Area",
            f"In the area I have cropped from the whole image, what {tense} the class "
            f"{phase}?",
            ["semantic_segmentation"],
            categorical(answer_class),
            script,
            crop=crop,
        )


def build_demo_suite(out_dir: Union[str, Path]) -> Path:
    """Build the 20-question suite; returns the dataset path."""
    b = SuiteBuilder(out_dir)

    # Whether
    b.whether_question("q01", _blank(FARMLAND), _block(_blank(FARMLAND), 5, 5, 10, 10, BUILDING), False)
    b.whether_question("q02", _blank(WATER), _block(_blank(WATER), 20, 12, 8, 8, ROAD), True)

    # Size / Basic: 25% and 10% changed area
    b.size_basic_question("q03", _blank(BARREN), _block(_blank(BARREN), 0, 0, 20, 20, BUILDING))
    b.size_basic_question("q04", _blank(FOREST), _block(_blank(FOREST), 10, 8, 16, 10, FARMLAND))

    # Size / Certain Class: water +25%, building -40%
    pre5 = _block(_blank(BG), 0, 0, 40, 10, WATER)          # 400 water px
    cur5 = _block(_blank(BG), 0, 0, 40, 12, WATER)
    cur5 = _block(cur5, 0, 12, 20, 1, WATER)                # 480 + 20 = 500 water px
    b.size_certain_class_question("q05", pre5, cur5, "water")
    pre6 = _block(_blank(BG), 0, 0, 25, 20, BUILDING)       # 500 building px
    cur6 = _block(_blank(BG), 0, 0, 15, 20, BUILDING)       # 300 building px
    b.size_certain_class_question("q06", pre6, cur6, "building")

    # Size / Local Area: 25% of a 16x16 crop, 10% of a 20x20 crop. A static
    # edge strip (same in pre and cur, outside the crop) keeps scenes unique.
    pre7 = _block(_blank(FOREST), 38, 0, 2, 40, ROAD)
    cur7 = _block(_block(pre7, 10, 10, 8, 8, BUILDING), 30, 30, 6, 6, ROAD)
    b.size_basic_question("q07", pre7, cur7, crop=CropSpec(CropRegion(8, 8, 16, 16), "both"))
    pre8 = _block(_blank(FARMLAND), 30, 38, 10, 2, WATER)
    cur8 = _block(_block(pre8, 2, 2, 5, 8, WATER), 25, 25, 10, 10, BUILDING)
    b.size_basic_question("q08", pre8, cur8, crop=CropSpec(CropRegion(0, 0, 20, 20), "both"))

    # Size / Analysis: urban sprawl and coastal conversion
    pre9 = _block(_block(_block(_blank(BG), 0, 0, 10, 20, BUILDING), 10, 0, 10, 10, ROAD), 0, 20, 40, 20, FARMLAND)
    cur9 = _block(_block(_block(_blank(BG), 0, 0, 20, 20, BUILDING), 20, 0, 20, 10, ROAD), 0, 20, 40, 10, FARMLAND)
    b.size_analysis_question("q09", pre9, cur9, ("building", "road"), "farmland", "Urban development expanded")
    pre10 = _block(_block(_block(_blank(BG), 0, 0, 15, 20, WATER), 20, 0, 10, 20, FOREST), 0, 25, 40, 15, BARREN)
    cur10 = _block(_block(_block(_blank(BG), 0, 0, 30, 20, WATER), 30, 0, 10, 30, FOREST), 0, 30, 40, 10, BARREN)
    b.size_analysis_question("q10", pre10, cur10, ("water", "forest"), "barren", "Natural cover grew")

    # Number / Basic: ships 3 -> 5, planes 6 -> 2
    port_pre = _block(_blank(WATER), 0, 30, 40, 10, BARREN)
    port_cur = _block(_blank(WATER), 0, 28, 40, 12, BARREN)
    b.number_question("q11", port_pre, port_cur, "ship", 3, 5)
    field_pre = _block(_blank(BG), 0, 0, 40, 8, ROAD)
    field_cur = _block(_blank(BG), 0, 0, 40, 6, ROAD)
    b.number_question("q12", field_pre, field_cur, "plane", 6, 2)

    # Number / Local Area: ships 2 -> 4, storage tanks 1 -> 3 inside the crop
    dock_pre = _block(_blank(WATER), 0, 0, 12, 40, BARREN)
    dock_cur = _block(_blank(WATER), 0, 0, 14, 40, BARREN)
    b.number_question("q13", dock_pre, dock_cur, "ship", 2, 4, crop=CropSpec(CropRegion(4, 4, 24, 24), "both"))
    yard_pre = _block(_blank(BARREN), 0, 0, 40, 10, ROAD)
    yard_cur = _block(_blank(BARREN), 0, 0, 40, 12, ROAD)
    b.number_question("q14", yard_pre, yard_cur, "storage tank", 1, 3, crop=CropSpec(CropRegion(10, 0, 20, 20), "both"))

    # Number / Comparison: ships (+3) vs harbors (+1); storage tanks (-4) vs planes (+1)
    bay_pre = _block(_blank(WATER), 30, 0, 10, 40, BARREN)
    bay_cur = _block(_blank(WATER), 28, 0, 12, 40, BARREN)
    b.number_comparison_question("q15", bay_pre, bay_cur, "ship", (2, 5), "harbor", (1, 2))
    base_pre = _block(_blank(BG), 0, 20, 40, 4, ROAD)
    base_cur = _block(_blank(BG), 0, 22, 40, 4, ROAD)
    b.number_comparison_question("q16", base_pre, base_cur, "storage tank", (6, 2), "plane", (2, 3))

    # Class / Whole Image: farmland -> building (with a stable road strip so
    # the scene differs from q01), water -> forest
    pre17 = _block(_blank(FARMLAND), 0, 36, 40, 4, ROAD)
    cur17 = _block(_blank(BUILDING), 0, 36, 40, 4, ROAD)
    b.class_whole_image_question("q17", pre17, cur17)
    pre18 = _block(_blank(BARREN), 0, 0, 40, 24, WATER)     # 60% water
    cur18 = _block(_blank(BARREN), 0, 0, 40, 28, FOREST)    # 70% forest
    b.class_whole_image_question("q18", pre18, cur18)

    # Class / Local Area: crop of pre is water; crop of cur is farmland
    pre19 = _block(_blank(BARREN), 0, 0, 12, 12, WATER)
    cur19 = _block(_blank(BARREN), 0, 0, 12, 12, BUILDING)
    b.class_local_area_question("q19", pre19, cur19, CropSpec(CropRegion(0, 0, 12, 12), "pre"))
    pre20 = _block(_blank(FOREST), 20, 20, 16, 16, BARREN)
    cur20 = _block(_blank(FOREST), 20, 20, 16, 16, FARMLAND)
    b.class_local_area_question("q20", pre20, cur20, CropSpec(CropRegion(20, 20, 16, 16), "cur"))

    dataset_path = b.out / "dataset.jsonl"
    save_dataset(b.questions, dataset_path)
    return dataset_path


def build_fault_suite(out_dir: Union[str, Path]) -> Path:
    """Eight deliberately broken runs, two per error class:

    f01/f02 right tools, wrong answer          -> Misunderstood
    f03/f04 half the pipeline, wrong answer    -> InsufficientTools
    f05/f06 required tools plus an irrelevant  -> IncorrectTools
    f07/f08 no relevant tool at all            -> TooComplex

    Every scene carries a distinct 4x4 marker block (identical in pre and
    cur, so it never counts as change) purely to keep image bytes unique.
    """
    b = SuiteBuilder(out_dir)

    def scene(qid, marker, block_class, offset, block_size=10):
        marker_x, marker_y, marker_class = marker
        pre_labels = _block(_blank(FARMLAND), marker_x, marker_y, 4, 4, marker_class)
        cur_labels = _block(pre_labels, offset, offset, block_size, block_size, block_class)
        session, pre, cur, _ = b._stage(qid, pre_labels, cur_labels, None)
        pct = float((pre_labels != cur_labels).mean() * 100.0)
        return session, pre, cur, pre_labels, cur_labels, pct

    size_text = "Estimate the percentage of the changed area relative to the total image size."
    whether_text = "Is there a discernible difference between the images indicating changes?"

    # Misunderstood: P = R = 1 but the answer contradicts the change map.
    for qid, marker, block_class, offset in (
        ("f01", (0, 35, WATER), BUILDING, 4),
        ("f02", (6, 35, BARREN), ROAD, 8),
    ):
        session, pre, cur, pre_labels, cur_labels, _ = scene(qid, marker, block_class, offset)
        b._cd(session, pre, cur, pre_labels != cur_labels)
        script = [
            _action("Get a change map.", "binary_change_detection",
                    f"pre={pre.filename}, cur={cur.filename}"),
            _final("No, the two images are identical."),
        ]
        b._emit(qid, "Whether", "/", whether_text,
                ["binary_change_detection"], boolean(True), script)

    # InsufficientTools: stops after change detection, never counts pixels.
    for qid, marker, block_class, offset in (
        ("f03", (12, 35, ROAD), WATER, 2),
        ("f04", (18, 35, BUILDING), BARREN, 12),
    ):
        session, pre, cur, pre_labels, cur_labels, pct = scene(qid, marker, block_class, offset)
        b._cd(session, pre, cur, pre_labels != cur_labels)
        script = [
            _action("Get a change map.", "binary_change_detection",
                    f"pre={pre.filename}, cur={cur.filename}"),
            _final("Roughly 99% of the area changed."),
        ]
        b._emit(qid, "Size", "Basic", size_text,
                ["binary_change_detection", "pixel_counting"],
                numeric(round(pct, 2), PCT_TOL), script)

    # IncorrectTools: the needed tool plus an irrelevant captioning call.
    for qid, marker, block_class, offset in (
        ("f05", (24, 35, FOREST), FOREST, 6),
        ("f06", (30, 35, WATER), ROAD, 16),
    ):
        session, pre, cur, pre_labels, cur_labels, _ = scene(qid, marker, block_class, offset)
        b._cd(session, pre, cur, pre_labels != cur_labels)
        b.store.put_caption(pre.self_id, "a rural scene with fields")
        script = [
            _action("Describe the image first.", "image_captioning", f"image={pre.filename}"),
            _action("Get a change map.", "binary_change_detection",
                    f"pre={pre.filename}, cur={cur.filename}"),
            _final("No, nothing changed at all."),
        ]
        b._emit(qid, "Whether", "/", whether_text,
                ["binary_change_detection"], boolean(True), script)

    # TooComplex: no relevant tool is ever applied.
    _, _, _, _, _, pct7 = scene("f07", (0, 30, ROAD), WATER, 6, block_size=12)
    b._emit("f07", "Size", "Basic", size_text,
            ["binary_change_detection", "pixel_counting"], numeric(round(pct7, 2), PCT_TOL),
            [_final("I would guess that around half of the scene changed.")])

    session, pre, _, _, _, pct8 = scene("f08", (6, 30, FOREST), BUILDING, 0, block_size=8)
    b.store.put_caption(pre.self_id, "bare farmland")
    b._emit("f08", "Size", "Basic", size_text,
            ["binary_change_detection", "pixel_counting"], numeric(round(pct8, 2), PCT_TOL),
            [
                _action("Describe the image.", "image_captioning", f"image={pre.filename}"),
                _final("The caption suggests nothing measurable; perhaps 1% changed."),
            ])

    dataset_path = b.out / "dataset.jsonl"
    save_dataset(b.questions, dataset_path)
    return dataset_path


def build_suite(out_dir: Union[str, Path]) -> Path:
    """Demo suite plus its fault-injection variant under <out>/fault/."""
    dataset = build_demo_suite(out_dir)
    build_fault_suite(Path(out_dir) / "fault")
    return dataset
