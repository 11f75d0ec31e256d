/** JSON shapes of the gateway API. */

export interface ImageRecord {
  self_id: string;
  link_id: string;
  role: string;
  filename: string;
  width: number;
  height: number;
  crop_region?: { x: number; y: number; w: number; h: number };
}

export interface ActionStep {
  thought: string;
  action: string;
  action_input: string;
  observation: string | null;
  duration_ms: number;
}

export interface FinalStep {
  thought: string;
  final_answer: string;
}

export type TraceStep = ActionStep | FinalStep;

export interface Trace {
  steps: TraceStep[];
  tools_used: string[];
  final_answer: string;
  status: string;
  elapsed_ms: number;
}

export interface QueryResponse {
  answer: string;
  tools_used: string[];
  trace: Trace;
}

export interface DialogueTurn {
  query: string;
  answer: string;
}

export interface GroupStats {
  count: number;
  precision: number;
  recall: number;
  match: number;
}

export interface EvalReport {
  totals: GroupStats;
  by_difficulty: Record<string, GroupStats>;
  by_type: Record<string, GroupStats>;
  error_histogram: Record<string, number>;
}

export function isFinalStep(step: TraceStep): step is FinalStep {
  return (step as FinalStep).final_answer !== undefined;
}
