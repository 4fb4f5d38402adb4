import type { AnalyzeOptions, AnalyzeResponse } from "./types.js";

/**
 * Workbench state transitions, kept pure so they are testable. Only one
 * analyze request is honoured at a time: responses carry the sequence
 * number of the request that produced them, and anything stale (an earlier
 * sequence than the newest issued) is discarded.
 */
export interface WorkbenchState {
  editorText: string;
  selectedModel: string | null;
  options: AnalyzeOptions;
  lastResponse: AnalyzeResponse | null;
  lastAnalyzedText: string | null;
  dirty: boolean;
  issuedSeq: number;
  renderedSeq: number;
}

export function initialState(): WorkbenchState {
  return {
    editorText: "",
    selectedModel: null,
    options: { n_summary: 3, jsd_threshold: 0.2, drop_delta: null },
    lastResponse: null,
    lastAnalyzedText: null,
    dirty: false,
    issuedSeq: 0,
    renderedSeq: 0,
  };
}

export function withEdit(state: WorkbenchState, text: string): WorkbenchState {
  return {
    ...state,
    editorText: text,
    dirty: state.lastAnalyzedText !== text,
  };
}

export function beginAnalyze(state: WorkbenchState): { state: WorkbenchState; seq: number } {
  const seq = state.issuedSeq + 1;
  return { state: { ...state, issuedSeq: seq }, seq };
}

export function applyResponse(
  state: WorkbenchState,
  seq: number,
  analyzedText: string,
  response: AnalyzeResponse,
): WorkbenchState {
  if (seq <= state.renderedSeq || seq > state.issuedSeq) {
    return state; // stale or unknown response: superseded by a newer edit
  }
  return {
    ...state,
    renderedSeq: seq,
    lastResponse: response,
    lastAnalyzedText: analyzedText,
    dirty: state.editorText !== analyzedText,
  };
}
