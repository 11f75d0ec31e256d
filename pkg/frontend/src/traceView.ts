/**
 * Trace inspector: one expandable card per reasoning step, in order, with
 * the final answer highlighted and tool-produced images inlined.
 */

import { isFinalStep, type Trace, type TraceStep } from "./types.js";

const FILENAME_RE = /\b[0-9a-f]{6}_[0-9a-f]{6}_[a-z][a-z0-9]*\.png\b/g;

export function producedImageIds(step: TraceStep): string[] {
  if (isFinalStep(step) || !step.observation) return [];
  const matches = step.observation.match(FILENAME_RE) ?? [];
  return matches.map((name) => name.split("_")[0]);
}

function stepCard(step: TraceStep, index: number, imageUrl: (id: string) => string): HTMLElement {
  const card = document.createElement("details");
  card.className = "trace-step";
  card.dataset.step = String(index + 1);
  card.open = true;

  const summary = document.createElement("summary");
  if (isFinalStep(step)) {
    summary.textContent = `Step ${index + 1}: Final Answer`;
  } else {
    summary.textContent = `Step ${index + 1}: ${step.action}`;
  }
  card.appendChild(summary);

  const thought = document.createElement("p");
  thought.className = "trace-thought";
  thought.textContent = `Thought: ${step.thought}`;
  card.appendChild(thought);

  if (isFinalStep(step)) {
    const answer = document.createElement("p");
    answer.className = "trace-final";
    answer.textContent = step.final_answer;
    card.appendChild(answer);
    return card;
  }

  const action = document.createElement("p");
  action.className = "trace-action";
  action.textContent = `Action: ${step.action}(${step.action_input})`;
  card.appendChild(action);

  const observation = document.createElement("p");
  observation.className = "trace-observation";
  observation.textContent = `Observation: ${step.observation ?? "(pending)"}`;
  card.appendChild(observation);

  for (const id of producedImageIds(step)) {
    const img = document.createElement("img");
    img.className = "trace-artifact";
    img.src = imageUrl(id);
    img.alt = `artifact ${id}`;
    img.loading = "lazy";
    card.appendChild(img);
  }
  return card;
}

export function renderTrace(
  trace: Trace,
  imageUrl: (id: string) => string = (id) => `/images/${id}`,
): HTMLElement {
  const container = document.createElement("div");
  container.className = "trace";

  trace.steps.forEach((step, index) => {
    container.appendChild(stepCard(step, index, imageUrl));
  });

  const banner = document.createElement("div");
  if (trace.status === "final") {
    banner.className = "answer-banner highlight";
    banner.textContent = trace.final_answer;
  } else {
    banner.className = "answer-banner failure";
    banner.textContent = `Query failed (${trace.status}): ${trace.final_answer}`;
  }
  container.appendChild(banner);
  return container;
}
