import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { cellColor } from "../src/colors.js";
import { buildHeatmapView } from "../src/heatmap.js";
import type { AnalyzeResponse } from "../src/types.js";

const here = dirname(fileURLToPath(import.meta.url));
const fixture: AnalyzeResponse = JSON.parse(
  readFileSync(join(here, "fixtures", "analyze_response.json"), "utf-8"),
);

describe("buildHeatmapView against the recorded service response", () => {
  const view = buildHeatmapView(fixture);

  it("grid dimensions match the fixture", () => {
    expect(view.nRows).toBe(fixture.sentences.length);
    expect(view.nRows).toBe(fixture.ppd.length);
    expect(view.nQuantiles).toBe(fixture.ppd[0].length);
    for (const row of view.rows) {
      expect(row.cells.length).toBe(view.nQuantiles);
    }
  });

  it("dot positions are weighted quantile over q", () => {
    view.rows.forEach((row, i) => {
      expect(row.dotFraction).toBeCloseTo(fixture.wq[i] / view.nQuantiles, 12);
      expect(row.weightedQuantile).toBe(fixture.wq[i]);
    });
  });

  it("boundary markers sit between the flagged rows", () => {
    expect(view.boundaryAfterRow).toEqual(fixture.boundaries.map(([left]) => left));
  });

  it("segments pass through unchanged", () => {
    expect(view.segments).toEqual(fixture.segments);
  });

  it("summary badges carry selection ranks", () => {
    fixture.summary.forEach((sentence, rank) => {
      expect(view.rows[sentence].summaryRank).toBe(rank);
    });
    const badged = view.rows.filter((row) => row.summaryRank !== null).length;
    expect(badged).toBe(fixture.summary.length);
  });

  it("row texts align with the request sentences", () => {
    view.rows.forEach((row, i) => {
      expect(row.text).toBe(fixture.sentences[i]);
    });
  });
});

describe("cell colors", () => {
  it("zero probability is white", () => {
    expect(cellColor(0, 0.8)).toBe("rgb(255,255,255)");
  });

  it("row max is deepest red", () => {
    expect(cellColor(0.8, 0.8)).toBe("rgb(255,0,0)");
  });

  it("intensity scales within the row", () => {
    expect(cellColor(0.4, 0.8)).toBe("rgb(255,128,128)");
  });

  it("view cells use the row maximum as the red anchor", () => {
    const view = buildHeatmapView(fixture);
    for (const row of view.rows) {
      const max = Math.max(...row.cells.map((c) => c.value));
      const deepest = row.cells.find((c) => c.value === max);
      expect(deepest?.color).toBe("rgb(255,0,0)");
    }
  });
});

describe("boundary marker rendering on a single-boundary fixture", () => {
  it("one marker between rows 1 and 2", () => {
    const single: AnalyzeResponse = {
      ...fixture,
      ppd: fixture.ppd.slice(0, 3),
      sentences: fixture.sentences.slice(0, 3),
      wq: fixture.wq.slice(0, 3),
      boundaries: [[1, 2, 0.5]],
      segments: [[0, 2]],
      summary: [0],
      summary_scores: [fixture.summary_scores[0]],
      degenerate_sentences: [],
    };
    const view = buildHeatmapView(single);
    expect(view.boundaryAfterRow).toEqual([1]);
  });
});
