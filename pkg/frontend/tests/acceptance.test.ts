// @vitest-environment jsdom
//
// Scripted end-to-end acceptance for the review UI: rate three clues on
// two items against the mock API, confirm /api/summary matches, and
// confirm a reload reflects only server-held state.
import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { ReviewController } from "../src/review.js";
import { MockApi, makeExamples } from "./mockApi.js";

async function settle(): Promise<void> {
  for (let i = 0; i < 10; i++) await Promise.resolve();
  await new Promise((resolve) => setTimeout(resolve, 0));
}

function rate(root: HTMLElement, clueIndex: number, rating: string): void {
  const card = root.querySelector<HTMLElement>(
    `.clue-card[data-clue-index="${clueIndex}"]`)!;
  const slot = [...root.querySelectorAll(".clue-card")].indexOf(card);
  root.querySelector<HTMLButtonElement>(
    `button.rate[data-slot="${slot}"][data-rating="${rating}"]`)!.click();
}

describe("review UI round trip", () => {
  it("rates 3 clues on 2 items; summary matches; reload is server-only", async () => {
    const mock = new MockApi(makeExamples(2));
    const api = new ApiClient("http://mock", mock.fetch);
    const root = document.createElement("div");
    document.body.replaceChildren(root);
    const controller = new ReviewController(api, root, {
      annotator: "acceptance",
      sessionSeed: 7,
    });
    await controller.start();

    // item 1: A, B, A (auto-advances after the third rating)
    rate(root, 0, "A"); await settle();
    rate(root, 1, "B"); await settle();
    rate(root, 2, "A"); await settle();
    expect(controller.currentExample()!.id).toBe("ex1");

    // item 2: C, A, E
    rate(root, 0, "C"); await settle();
    rate(root, 1, "A"); await settle();
    rate(root, 2, "E"); await settle();

    const summary = await api.getSummary();
    expect(summary.total).toBe(6);
    expect(summary.counts.A).toBe(3);
    expect(summary.counts.B).toBe(1);
    expect(summary.counts.C).toBe(1);
    expect(summary.counts.E).toBe(1);
    expect(summary.acceptable_share).toBeCloseTo(100 * 4 / 6, 6);

    // reload: a fresh controller holds no client state and mirrors the server
    const root2 = document.createElement("div");
    document.body.append(root2);
    const reloaded = new ReviewController(
      new ApiClient("http://mock", mock.fetch), root2,
      { annotator: "acceptance", sessionSeed: 7 });
    await reloaded.start();
    expect(reloaded.currentExample()!.id).toBe("ex0");
    expect(reloaded.ratingFor(0)).toBe("A");
    expect(reloaded.ratingFor(1)).toBe("B");
    expect(reloaded.ratingFor(2)).toBe("A");
    expect(root2.querySelector(".progress")!.textContent).toContain("rated 3/3");

    // the server ledger, not the UI, is the source of truth
    const ledger = mock.latest();
    expect(ledger).toHaveLength(6);
  });
});
