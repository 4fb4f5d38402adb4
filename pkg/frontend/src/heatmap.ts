import { cellColor } from "./colors.js";
import type { AnalyzeResponse, Segment } from "./types.js";

export interface HeatmapCellView {
  value: number;
  color: string;
}

export interface HeatmapRowView {
  index: number;
  text: string;
  cells: HeatmapCellView[];
  /** Dot centre as a fraction of the row width: weighted quantile / q. */
  dotFraction: number;
  weightedQuantile: number;
  summaryRank: number | null;
  degenerate: boolean;
}

export interface HeatmapView {
  nRows: number;
  nQuantiles: number;
  rows: HeatmapRowView[];
  /** A marker sits between rows i and i+1 for every listed i. */
  boundaryAfterRow: number[];
  segments: Segment[];
  coherenceTau: number;
}

/**
 * Pure view model for the PPD heatmap. ``summaryOverride`` substitutes a
 * client-side re-selection (e.g. after changing n) for the server's.
 */
export function buildHeatmapView(
  response: AnalyzeResponse,
  summaryOverride?: number[],
): HeatmapView {
  const nRows = response.ppd.length;
  const nQuantiles = nRows > 0 ? response.ppd[0].length : 0;
  const summary = summaryOverride ?? response.summary;
  const rankOf = new Map<number, number>();
  summary.forEach((sentence, rank) => rankOf.set(sentence, rank));
  const degenerate = new Set(response.degenerate_sentences);
  const rows: HeatmapRowView[] = response.ppd.map((probs, i) => {
    const rowMax = probs.reduce((a, b) => Math.max(a, b), 0);
    return {
      index: i,
      text: response.sentences[i],
      cells: probs.map((value) => ({ value, color: cellColor(value, rowMax) })),
      dotFraction: nQuantiles > 0 ? response.wq[i] / nQuantiles : 0,
      weightedQuantile: response.wq[i],
      summaryRank: rankOf.has(i) ? rankOf.get(i)! : null,
      degenerate: degenerate.has(i),
    };
  });
  return {
    nRows,
    nQuantiles,
    rows,
    boundaryAfterRow: response.boundaries.map(([left]) => left),
    segments: response.segments,
    coherenceTau: response.coherence.tau,
  };
}
