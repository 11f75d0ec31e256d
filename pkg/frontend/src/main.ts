/** App assembly: session setup, viewer, chat + trace inspector, dashboard. */

import { GatewayClient } from "./api.js";
import { ChatController, renderTranscript } from "./chat.js";
import { renderReport } from "./dashboard.js";
import { renderTrace } from "./traceView.js";
import type { EvalReport, ImageRecord } from "./types.js";
import { PairViewer, renderCropThumbnails } from "./viewer.js";

function byId<T extends HTMLElement>(id: string): T {
  const element = document.getElementById(id);
  if (!element) throw new Error(`missing element #${id}`);
  return element as T;
}

function toast(message: string): void {
  const host = byId<HTMLDivElement>("toasts");
  const note = document.createElement("div");
  note.className = "toast";
  note.textContent = message;
  host.appendChild(note);
  setTimeout(() => note.remove(), 4000);
}

async function readFile(input: HTMLInputElement): Promise<Blob> {
  const file = input.files?.[0];
  if (!file) throw new Error("choose a PNG file first");
  return file;
}

export async function startApp(): Promise<void> {
  const client = new GatewayClient("");
  const sessionId = await client.createSession();
  byId<HTMLSpanElement>("session-label").textContent = sessionId;

  let pre: ImageRecord | null = null;
  let cur: ImageRecord | null = null;
  const crops: ImageRecord[] = [];

  const viewer = new PairViewer(client, sessionId, {
    onCrop(records) {
      crops.push(...records);
      byId<HTMLDivElement>("crops").replaceChildren(
        renderCropThumbnails(crops, (id) => client.imageUrl(id)),
      );
      toast(`cropped: ${records.map((r) => r.filename).join(", ")}`);
    },
    onError(message) {
      toast(`crop failed: ${message}`);
    },
  });
  byId<HTMLDivElement>("viewer").appendChild(viewer.element);

  const chat = new ChatController(client, sessionId, {
    onTranscript(turns) {
      byId<HTMLDivElement>("transcript").replaceChildren(renderTranscript(turns));
    },
    onTrace(trace) {
      byId<HTMLDivElement>("trace").replaceChildren(
        renderTrace(trace, (id) => client.imageUrl(id)),
      );
    },
    onPendingChange(pending) {
      byId<HTMLButtonElement>("send").disabled = pending;
    },
    onError(message) {
      toast(message);
    },
  });

  byId<HTMLButtonElement>("upload").addEventListener("click", async () => {
    try {
      const preBlob = await readFile(byId<HTMLInputElement>("pre-file"));
      const curBlob = await readFile(byId<HTMLInputElement>("cur-file"));
      pre = await client.uploadImage(sessionId, "pre", preBlob);
      cur = await client.uploadImage(sessionId, "cur", curBlob, pre.link_id);
      viewer.setPair(pre, cur);
      toast(`registered ${pre.filename} and ${cur.filename}`);
    } catch (error: any) {
      toast(`upload failed: ${error?.message ?? error}`);
    }
  });

  byId<HTMLInputElement>("zoom").addEventListener("input", (event) => {
    viewer.setZoom(Number((event.target as HTMLInputElement).value));
  });
  byId<HTMLInputElement>("crop-both").addEventListener("change", (event) => {
    viewer.setCropBoth((event.target as HTMLInputElement).checked);
  });

  byId<HTMLButtonElement>("send").addEventListener("click", async () => {
    const input = byId<HTMLInputElement>("question");
    await chat.send(input.value);
    input.value = "";
  });

  byId<HTMLInputElement>("report-file").addEventListener("change", async (event) => {
    const file = (event.target as HTMLInputElement).files?.[0];
    if (!file) return;
    try {
      const report = JSON.parse(await file.text()) as EvalReport;
      byId<HTMLDivElement>("dashboard").replaceChildren(renderReport(report));
    } catch (error: any) {
      toast(`bad report file: ${error?.message ?? error}`);
    }
  });

  await chat.refreshTranscript();
}

if (typeof document !== "undefined" && document.getElementById("viewer")) {
  startApp().catch((error) => {
    console.error(error);
    const host = document.getElementById("toasts");
    if (host) host.textContent = `startup failed: ${error?.message ?? error}`;
  });
}
