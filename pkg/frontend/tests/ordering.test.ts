import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { applySuggestedOrder, joinSentences } from "../src/ordering.js";
import type { AnalyzeResponse } from "../src/types.js";

const here = dirname(fileURLToPath(import.meta.url));
const fixture: AnalyzeResponse = JSON.parse(
  readFileSync(join(here, "fixtures", "analyze_response.json"), "utf-8"),
);

describe("apply suggested order", () => {
  it("rearranges sentences by the induced permutation", () => {
    expect(applySuggestedOrder(["a", "b", "c"], [2, 0, 1])).toEqual(["c", "a", "b"]);
  });

  it("reordered fixture sentences have non-decreasing weighted quantiles", () => {
    const ordered = applySuggestedOrder(
      fixture.sentences,
      fixture.ordering.permutation,
    );
    expect(ordered.length).toBe(fixture.sentences.length);
    const wqInOrder = fixture.ordering.permutation.map(
      (i) => fixture.ordering.weighted_quantiles[i],
    );
    for (let i = 1; i < wqInOrder.length; i += 1) {
      expect(wqInOrder[i]).toBeGreaterThanOrEqual(wqInOrder[i - 1]);
    }
    expect(joinSentences(ordered).split("\n")).toEqual(ordered);
  });

  it("rejects a permutation of the wrong length", () => {
    expect(() => applySuggestedOrder(["a"], [0, 1])).toThrow();
  });
});
