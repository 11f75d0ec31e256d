import { describe, expect, it, vi } from "vitest";

import { ApiError, type GatewayClient } from "../src/api.js";
import { ChatController, renderTranscript } from "../src/chat.js";
import type { DialogueTurn, Trace } from "../src/types.js";

const emptyTrace: Trace = {
  steps: [],
  tools_used: [],
  final_answer: "Yes.",
  status: "final",
  elapsed_ms: 1,
};

function makeEvents() {
  return {
    onTranscript: vi.fn(),
    onTrace: vi.fn(),
    onPendingChange: vi.fn(),
    onError: vi.fn(),
  };
}

function fakeClient(overrides: Partial<GatewayClient>): GatewayClient {
  return {
    history: vi.fn(async () => [] as DialogueTurn[]),
    query: vi.fn(async () => ({ answer: "Yes.", tools_used: [], trace: emptyTrace })),
    ...overrides,
  } as unknown as GatewayClient;
}

describe("ChatController", () => {
  it("sends a query, surfaces the trace, then mirrors server history", async () => {
    const turns: DialogueTurn[] = [{ query: "change?", answer: "Yes." }];
    const client = fakeClient({ history: vi.fn(async () => turns) });
    const events = makeEvents();
    const chat = new ChatController(client, "s1", events);

    await chat.send("change?");

    expect((client.query as any).mock.calls).toEqual([["s1", "change?"]]);
    expect(events.onTrace).toHaveBeenCalledWith(emptyTrace);
    expect(events.onTranscript).toHaveBeenCalledWith(turns);
    // pending toggled on, then off
    expect(events.onPendingChange.mock.calls.map((c) => c[0])).toEqual([true, false]);
  });

  it("refuses a second in-flight query (client-side 409 guard)", async () => {
    let release: () => void = () => {};
    const gate = new Promise<void>((resolve) => (release = resolve));
    const client = fakeClient({
      query: vi.fn(async () => {
        await gate;
        return { answer: "done", tools_used: [], trace: emptyTrace };
      }),
    });
    const events = makeEvents();
    const chat = new ChatController(client, "s1", events);

    const first = chat.send("one");
    expect(chat.isPending).toBe(true);
    await chat.send("two"); // dropped while pending
    release();
    await first;
    expect((client.query as any).mock.calls.length).toBe(1);
  });

  it("ignores blank questions", async () => {
    const client = fakeClient({});
    const chat = new ChatController(client, "s1", makeEvents());
    await chat.send("   ");
    expect((client.query as any).mock.calls.length).toBe(0);
  });

  it("surfaces a backend failure's partial trace and message", async () => {
    const partial: Trace = { ...emptyTrace, status: "step_limit", final_answer: "" };
    const client = fakeClient({
      query: vi.fn(async () => {
        throw new ApiError(502, "backend failure: script exhausted", { trace: partial });
      }),
    });
    const events = makeEvents();
    const chat = new ChatController(client, "s1", events);

    await chat.send("q");
    expect(events.onTrace).toHaveBeenCalledWith(partial);
    expect(events.onError).toHaveBeenCalledWith("backend failure: script exhausted");
    expect(chat.isPending).toBe(false);
  });
});

describe("renderTranscript", () => {
  it("renders alternating human/agent bubbles in order", () => {
    const view = renderTranscript([
      { query: "first?", answer: "one" },
      { query: "second?", answer: "two" },
    ]);
    const bubbles = Array.from(view.querySelectorAll(".bubble"));
    expect(bubbles.map((b) => b.textContent)).toEqual(["first?", "one", "second?", "two"]);
    expect(bubbles[0].classList.contains("human")).toBe(true);
    expect(bubbles[1].classList.contains("agent")).toBe(true);
  });
});
