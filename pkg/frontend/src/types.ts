// Wire types for the analysis service (see the service's pydantic schemas).

export interface CoherencePayload {
  tau: number;
  n: number;
  degenerate: boolean;
}

export interface OrderingPayload {
  permutation: number[];
  weighted_quantiles: number[];
}

/** Boundary triple: [leftRow, rightRow, divergence]. */
export type BoundaryTriple = [number, number, number];

/** Inclusive [start, end] sentence index range. */
export type Segment = [number, number];

export interface AnalyzeResponse {
  model_id: string;
  sentences: string[];
  ppd: number[][];
  wq: number[];
  boundaries: BoundaryTriple[];
  segments: Segment[];
  summary: number[];
  summary_scores: number[];
  coherence: CoherencePayload;
  ordering: OrderingPayload;
  degenerate_sentences: number[];
}

export interface AnalyzeOptions {
  n_summary: number;
  jsd_threshold: number;
  drop_delta: number | null;
}

export interface ModelEntry {
  model_id: string;
  created_at: string;
  config: Record<string, unknown>;
  vocab_hash: string;
  corpus_tag: string;
}
