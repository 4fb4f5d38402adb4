import { cellColor } from "./colors.js";
/**
 * Pure view model for the PPD heatmap. ``summaryOverride`` substitutes a
 * client-side re-selection (e.g. after changing n) for the server's.
 */
export function buildHeatmapView(response, summaryOverride) {
    const nRows = response.ppd.length;
    const nQuantiles = nRows > 0 ? response.ppd[0].length : 0;
    const summary = summaryOverride ?? response.summary;
    const rankOf = new Map();
    summary.forEach((sentence, rank) => rankOf.set(sentence, rank));
    const degenerate = new Set(response.degenerate_sentences);
    const rows = response.ppd.map((probs, i) => {
        const rowMax = probs.reduce((a, b) => Math.max(a, b), 0);
        return {
            index: i,
            text: response.sentences[i],
            cells: probs.map((value) => ({ value, color: cellColor(value, rowMax) })),
            dotFraction: nQuantiles > 0 ? response.wq[i] / nQuantiles : 0,
            weightedQuantile: response.wq[i],
            summaryRank: rankOf.has(i) ? rankOf.get(i) : null,
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
