/**
 * Chat panel state: one in-flight query at a time (send stays disabled while
 * pending, matching the gateway's 409-busy rule), and a transcript that is
 * re-read from the server after every completed round so the client never
 * drifts from GET /history.
 */

import type { GatewayClient } from "./api.js";
import type { DialogueTurn, Trace } from "./types.js";

export interface ChatEvents {
  onTranscript(turns: DialogueTurn[]): void;
  onTrace(trace: Trace): void;
  onPendingChange(pending: boolean): void;
  onError(message: string): void;
}

export class ChatController {
  private pending = false;

  constructor(
    private readonly client: GatewayClient,
    private readonly sessionId: string,
    private readonly events: ChatEvents,
  ) {}

  get isPending(): boolean {
    return this.pending;
  }

  async refreshTranscript(): Promise<void> {
    this.events.onTranscript(await this.client.history(this.sessionId));
  }

  async send(question: string): Promise<void> {
    if (this.pending || !question.trim()) return;
    this.pending = true;
    this.events.onPendingChange(true);
    try {
      const response = await this.client.query(this.sessionId, question);
      this.events.onTrace(response.trace);
    } catch (error: any) {
      // a failed query may still carry the partial trace (502 payload)
      const trace = error?.payload?.trace as Trace | undefined;
      if (trace) this.events.onTrace(trace);
      this.events.onError(error?.message ?? String(error));
    } finally {
      this.pending = false;
      this.events.onPendingChange(false);
      try {
        await this.refreshTranscript();
      } catch (error: any) {
        this.events.onError(error?.message ?? String(error));
      }
    }
  }
}

export function renderTranscript(turns: DialogueTurn[]): HTMLElement {
  const list = document.createElement("div");
  list.className = "transcript";
  for (const turn of turns) {
    const you = document.createElement("div");
    you.className = "bubble human";
    you.textContent = turn.query;
    const agent = document.createElement("div");
    agent.className = "bubble agent";
    agent.textContent = turn.answer;
    list.appendChild(you);
    list.appendChild(agent);
  }
  return list;
}
