// @vitest-environment jsdom
import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { Dashboard, formatShare } from "../src/dashboard.js";
import { MockApi, makeExamples } from "./mockApi.js";

function setup(exampleCount = 120) {
  const mock = new MockApi(makeExamples(exampleCount));
  const api = new ApiClient("http://mock", mock.fetch);
  const root = document.createElement("div");
  document.body.replaceChildren(root);
  return { mock, api, dashboard: new Dashboard(api, root), root };
}

describe("Dashboard", () => {
  it("renders a zeroed chart for an empty ledger", async () => {
    const { dashboard, root } = setup();
    await dashboard.refresh();
    expect(root.querySelector("#share-acceptable")!.textContent!.trim())
      .toBe("0%");
    const values = [...root.querySelectorAll(".bar-value")]
      .map((node) => node.textContent);
    expect(values.every((text) => text!.startsWith("0.0%"))).toBe(true);
  });

  it("renders 81% acceptable share for a 72/9/19 ledger", async () => {
    const { mock, dashboard, root } = setup();
    const labels = [
      ...Array(72).fill("A"),
      ...Array(9).fill("B"),
      ...Array(19).fill("C"),
    ];
    labels.forEach((rating, i) => {
      mock.records.push({
        example_id: `ex${i}`,
        clue_index: 0,
        rating,
        annotator: "ann",
        rated_at: "2024-01-01T00:00:00Z",
      });
    });
    await dashboard.refresh();
    expect(root.querySelector("#share-acceptable")!.textContent!.trim())
      .toBe("81%");
    expect(root.querySelector("#share-a")!.textContent!.trim()).toBe("72%");
    const aRow = root.querySelector('.bar-row[data-label="A"] .bar-value');
    expect(aRow!.textContent).toContain("72.0% (72)");
  });

  it("chart totals equal the ledger totals", async () => {
    const { mock, dashboard, root } = setup();
    for (let i = 0; i < 30; i++) {
      mock.records.push({
        example_id: `ex${i % 5}`,
        clue_index: i % 3,
        rating: (["A", "B", "C", "D", "E"] as const)[i % 5],
        annotator: `ann${i % 2}`,
        rated_at: "2024-01-01T00:00:00Z",
      });
    }
    await dashboard.refresh();
    const counted = [...root.querySelectorAll(".bar-value")]
      .map((node) => Number(node.textContent!.match(/\((\d+)\)/)![1]))
      .reduce((a, b) => a + b, 0);
    expect(counted).toBe(mock.latest().length);
    expect(dashboard.lastSummary!.total).toBe(mock.latest().length);
  });
});

describe("formatShare", () => {
  it("rounds to a whole percent", () => {
    expect(formatShare(81.0)).toBe("81%");
    expect(formatShare(71.6)).toBe("72%");
  });
});
