"""Prompt assembly.

Each reasoning round sends the model one prompt built from five sections in
fixed order: the role/constraint prefix (with the tool roster), the image
registry listing, the reference listing (derived artifacts plus recent log
activity), the format instructions, and the suffix carrying conversation
history, the live question and the scratchpad of steps taken so far.
"""

from __future__ import annotations

from dataclasses import dataclass

from .records import AgentStep, DialogueTurn, ImageRecord, LogEntry

CHANGEGPT_PREFIX = """ChangeGPT is designed to specifically address queries related to changes observed in satellite imagery over time.

ChangeGPT is able to generate human-like text based on the input it receives, allowing it to engage in natural-sounding conversations and provide responses that are coherent and relevant to the topic at hand.

ChangeGPT can process and understand large amounts of remote sensing images, knowledge, and text. As a expertized language model, ChangeGPT cannot directly read remote sensing images, but it has a list of tools to leverage advanced tools to detect, quantify, and classify changes between images, providing insights into land cover transformations, urban expansion, environmental shifts, and more. Each pair of input remote sensing images will be carefully managed with a file name indicating their temporal relationship, labeled as "previous" (`_pre`) and "current" (`_cur`), for instance, "image/xxxx_pre.png" and "image/xxxx_cur.png". This naming convention ensures a structured approach to change detection, facilitating precise analysis and interpretation of temporal changes. ChangeGPT can invoke different tools to indirectly understand the remote sensing image.

When talking about images, ChangeGPT is very strict to the file name and will never fabricate nonexistent files. When using tools to generate new image files, ChangeGPT is also known that the image may not be the same as the user's demand, and will use other visual question answering tools or description tools to observe the real image. ChangeGPT is able to use tools in a sequence, and is loyal to the tool observation outputs rather than faking the image content and image file name. It will remember to provide the file name from the last tool observation, if a new image is generated. Human may provide new remote sensing images to ChangeGPT with a description. The description helps ChangeGPT to understand this image, but ChangeGPT should use tools to finish following tasks, rather than directly imagine from the description.

Overall, ChangeGPT is a powerful visual dialogue assistant tool that can help with a wide range of tasks about remote sensing changes and provide valuable insights and information on a wide range of applications on remote sensing changes.

TOOLS:

ChangeGPT has access to the following tools:
{tools}
"""

CHANGEGPT_FORMAT_INSTRUCTIONS = """To use a tool, please use the following format:

Question: the input question you must answer
Thought: you should always think about what to do
Action: the action to take, should be one of [{tool_names}]
Action Input: the input to the action
Observation: the result of the action
... (this Thought/Action/Action Input/Observation can repeat N times)
Thought: I now know the final answer
Final Answer: the final answer to the original input question
"""

CHANGEGPT_SUFFIX = """You are very strict to the filename correctness and will never fake a file name if it does not exist.
You will remember to provide the image file name loyally if it's provided in the last tool observation.
Begin!
Previous conversation history:
{chat_history}
Question: {input}
Since ChangeGPT is a text language model, ChangeGPT must use tools to observe remote sensing images rather than imagination.
The thoughts and observations are only visible for ChangeGPT, ChangeGPT should remember to repeat important information in the final response for Human.
Thought: Do I need to use a tool? {agent_scratchpad} Let's think step by step.
"""

THOUGHT_REPROMPT = "Thought: Do I need to use a tool?"

# How many trailing reference-log entries the reference section shows.
REFERENCE_LOG_DEPTH = 20


@dataclass(frozen=True)
class PromptBundle:
    """The five prompt sections, concatenated in this fixed order."""

    prefix: str
    image_section: str
    reference_section: str
    format_instructions: str
    suffix: str

    @property
    def full_text(self) -> str:
        return "\n".join(
            (
                self.prefix,
                self.image_section,
                self.reference_section,
                self.format_instructions,
                self.suffix,
            )
        )


def render_image_line(record: ImageRecord) -> str:
    link_kind = "pair" if (record.is_pre or record.is_cur) else "parent"
    return f"{record.filename} ({record.role_token}, {record.width}x{record.height}, {link_kind} {record.link_id})"


def render_image_section(records: list[ImageRecord]) -> str:
    lines = ["IMAGES:"]
    if records:
        lines.extend(render_image_line(r) for r in records)
    else:
        lines.append("(none registered)")
    return "\n".join(lines)


def render_reference_section(
    derived: list[ImageRecord], log_entries: list[LogEntry]
) -> str:
    lines = ["REFERENCES:"]
    lines.append("Derived artifacts:")
    if derived:
        lines.extend(f"  {render_image_line(r)}" for r in derived)
    else:
        lines.append("  (none)")
    lines.append("Recent activity:")
    recent = log_entries[-REFERENCE_LOG_DEPTH:]
    if recent:
        lines.extend(f"  [{e.kind}] {e.payload}" for e in recent)
    else:
        lines.append("  (none)")
    return "\n".join(lines)


def render_chat_history(turns: list[DialogueTurn]) -> str:
    return "\n".join(f"Human: {t.query}\nAI: {t.answer}" for t in turns)


def render_scratchpad(steps: list[AgentStep], correction: str = "") -> str:
    """The in-progress reasoning transcript re-fed to the model each round.

    Empty before the first step; afterwards each completed step re-appears
    exactly as the model produced it, with its observation and a fresh
    thought re-prompt appended.
    """
    parts = []
    for step in steps:
        parts.append(
            f"Thought: {step.thought}\n"
            f"Action: {step.action}\n"
            f"Action Input: {step.action_input}\n"
            f"Observation: {step.observation}\n"
            f"{THOUGHT_REPROMPT}"
        )
    text = "\n".join(parts)
    if correction:
        block = (
            "Your previous reply did not follow the required format. It was:\n"
            f"{correction}\n"
            "Reply again, following the format exactly.\n"
            f"{THOUGHT_REPROMPT}"
        )
        text = f"{text}\n{block}" if text else block
    return text


def assemble_bundle(
    records: list[ImageRecord],
    derived: list[ImageRecord],
    log_entries: list[LogEntry],
    turns: list[DialogueTurn],
    tools_block: str,
    tool_names: str,
    query: str,
    steps: list[AgentStep],
    correction: str = "",
) -> PromptBundle:
    return PromptBundle(
        prefix=CHANGEGPT_PREFIX.format(tools=tools_block),
        image_section=render_image_section(records),
        reference_section=render_reference_section(derived, log_entries),
        format_instructions=CHANGEGPT_FORMAT_INSTRUCTIONS.format(tool_names=tool_names),
        suffix=CHANGEGPT_SUFFIX.format(
            chat_history=render_chat_history(turns),
            input=query,
            agent_scratchpad=render_scratchpad(steps, correction),
        ),
    )
