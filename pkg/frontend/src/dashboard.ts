import { ApiClient } from "./api.js";
import type { RatingValue, SummaryResponse } from "./types.js";

const ORDER: RatingValue[] = ["A", "B", "C", "D", "E", "SKIP", "EMPTY"];

export function formatShare(value: number): string {
  return `${Math.round(value)}%`;
}

/** Rating distribution chart plus the headline A and A+B shares. */
export class Dashboard {
  lastSummary: SummaryResponse | null = null;

  constructor(private api: ApiClient, private root: HTMLElement) {}

  async refresh(annotator?: string): Promise<void> {
    const summary = await this.api.getSummary(annotator);
    this.lastSummary = summary;
    this.render(summary);
  }

  render(summary: SummaryResponse): void {
    const bars = ORDER.map((label) => {
      const count = summary.counts[label] ?? 0;
      const percent = summary.percent[label] ?? 0;
      return `
        <div class="bar-row" data-label="${label}">
          <span class="bar-label">${label}</span>
          <div class="bar-track">
            <div class="bar-fill bar-${label.toLowerCase()}"
                 style="width: ${percent.toFixed(1)}%"></div>
          </div>
          <span class="bar-value">${percent.toFixed(1)}% (${count})</span>
        </div>`;
    }).join("");

    this.root.innerHTML = `
      <div class="shares">
        <div class="share-box">
          <span class="share-figure" id="share-a">
            ${formatShare(summary.percent.A ?? 0)}</span>
          <span class="share-caption">rated A</span>
        </div>
        <div class="share-box">
          <span class="share-figure" id="share-acceptable">
            ${formatShare(summary.acceptable_share)}</span>
          <span class="share-caption">acceptable (A+B)</span>
        </div>
        <div class="share-box">
          <span class="share-figure">${summary.total}</span>
          <span class="share-caption">judgments</span>
        </div>
      </div>
      <div class="chart">${bars}</div>`;
  }
}
