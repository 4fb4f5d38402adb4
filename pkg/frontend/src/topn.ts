/**
 * Client-side summary re-selection: the n highest scores, ties broken
 * toward the earlier sentence, returned in descending-score order. Must
 * match the server's selection for the same scores and n.
 */
export function selectTopN(scores: number[], n: number): number[] {
  const order = scores.map((_, i) => i);
  order.sort((a, b) => (scores[b] - scores[a]) || (a - b));
  return order.slice(0, Math.max(0, Math.min(n, scores.length)));
}

/** First-quantile scores straight out of a PPD matrix. */
export function firstQuantileScores(ppd: number[][]): number[] {
  return ppd.map((row) => row[0]);
}
