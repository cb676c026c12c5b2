import { ApiClient, ApiError } from "./api.js";
import type { ExampleRow, RatingValue } from "./types.js";
import { HUMAN_RATINGS } from "./types.js";

/**
 * One reviewable item: context with the keyword highlighted, three clue
 * cards in a seed-shuffled display order, and progress counters. Ratings
 * update optimistically and roll back if the server rejects them; nothing
 * is persisted on the client, so the card state always converges to the
 * server ledger.
 */

export interface ReviewOptions {
  annotator: string;
  sessionSeed: number;
}

/** Deterministic per-(seed, key) shuffle of [0, 1, 2]. */
export function shuffledOrder(seed: number, key: string): number[] {
  let h = seed >>> 0;
  for (const ch of key) {
    h = (h * 31 + ch.charCodeAt(0)) >>> 0;
  }
  const order = [0, 1, 2];
  for (let i = order.length - 1; i > 0; i--) {
    h = (h * 1103515245 + 12345) >>> 0;
    const j = h % (i + 1);
    [order[i], order[j]] = [order[j], order[i]];
  }
  return order;
}

export function highlightKeyword(context: string, keyword: string): string {
  const escaped = escapeHtml(context);
  if (!keyword) return escaped;
  const pattern = new RegExp(escapeRegExp(escapeHtml(keyword)), "gi");
  return escaped.replace(pattern, (match) => `<mark>${match}</mark>`);
}

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function escapeRegExp(text: string): string {
  return text.replace(/[.*+?^${}()|[\]\\]/g, "\\$&");
}

export class ReviewController {
  private ids: string[] = [];
  private index = 0;
  private current: ExampleRow | null = null;
  /** Latest known server state: clue_index -> rating. */
  private ratings = new Map<number, RatingValue>();
  private displayOrder: number[] = [0, 1, 2];
  private focusedSlot = 0;

  constructor(
    private api: ApiClient,
    private root: HTMLElement,
    private options: ReviewOptions,
  ) {
    this.root.addEventListener("keydown", (event) => this.onKey(event));
  }

  async start(): Promise<void> {
    this.ids = [];
    let offset = 0;
    for (;;) {
      const page = await this.api.listExamples(offset, 100);
      this.ids.push(...page.examples.map((example) => example.id));
      offset += page.examples.length;
      if (offset >= page.total || page.examples.length === 0) break;
    }
    if (this.ids.length === 0) {
      this.root.innerHTML = `<p class="empty">No examples loaded.</p>`;
      return;
    }
    await this.show(0);
  }

  itemCount(): number {
    return this.ids.length;
  }

  currentExample(): ExampleRow | null {
    return this.current;
  }

  ratingFor(clueIndex: number): RatingValue | undefined {
    return this.ratings.get(clueIndex);
  }

  async show(index: number): Promise<void> {
    this.index = Math.max(0, Math.min(index, this.ids.length - 1));
    const id = this.ids[this.index];
    this.current = await this.api.getExample(id);
    this.ratings = new Map();
    const existing = await this.api.getRatings(id, this.options.annotator);
    for (const record of existing) {
      this.ratings.set(record.clue_index, record.rating);
    }
    this.displayOrder = shuffledOrder(this.options.sessionSeed, id);
    this.focusedSlot = this.firstUnratedSlot();
    this.render();
  }

  private firstUnratedSlot(): number {
    for (let slot = 0; slot < 3; slot++) {
      if (!this.ratings.has(this.displayOrder[slot])) return slot;
    }
    return 0;
  }

  private itemComplete(): boolean {
    return [0, 1, 2].every((clueIndex) => this.ratings.has(clueIndex));
  }

  async rate(slot: number, rating: RatingValue): Promise<void> {
    if (!this.current) return;
    const clueIndex = this.displayOrder[slot];
    const before = this.ratings.get(clueIndex);
    this.ratings.set(clueIndex, rating); // optimistic
    this.render();
    try {
      await this.api.postRating(
        this.current.id, clueIndex, rating, this.options.annotator);
    } catch (error) {
      if (before === undefined) {
        this.ratings.delete(clueIndex);
      } else {
        this.ratings.set(clueIndex, before);
      }
      this.render(error instanceof ApiError
        ? `Server rejected rating: ${error.message}`
        : `Network error; rating not saved`);
      return;
    }
    if (this.itemComplete()) {
      if (this.index + 1 < this.ids.length) {
        await this.show(this.index + 1);
      } else {
        this.render(undefined, "All items reviewed.");
      }
      return;
    }
    this.focusedSlot = this.firstUnratedSlot();
    this.render();
  }

  /** SKIP applies to the whole item: every clue gets a SKIP record. */
  async skipItem(): Promise<void> {
    if (!this.current) return;
    const id = this.current.id;
    const before = new Map(this.ratings);
    for (const clueIndex of [0, 1, 2]) this.ratings.set(clueIndex, "SKIP");
    this.render();
    try {
      for (const clueIndex of [0, 1, 2]) {
        await this.api.postRating(id, clueIndex, "SKIP", this.options.annotator);
      }
    } catch (error) {
      this.ratings = before;
      this.render(error instanceof ApiError
        ? `Server rejected skip: ${error.message}`
        : `Network error; skip not saved`);
      return;
    }
    if (this.index + 1 < this.ids.length) {
      await this.show(this.index + 1);
    } else {
      this.render(undefined, "All items reviewed.");
    }
  }

  private onKey(event: KeyboardEvent): void {
    const key = event.key.toUpperCase();
    if ((HUMAN_RATINGS as string[]).includes(key)) {
      event.preventDefault();
      void this.rate(this.focusedSlot, key as RatingValue);
    } else if (key === "S") {
      event.preventDefault();
      void this.skipItem();
    } else if (event.key === "ArrowRight") {
      void this.show(this.index + 1);
    } else if (event.key === "ArrowLeft") {
      void this.show(this.index - 1);
    } else if (event.key === "Tab") {
      event.preventDefault();
      this.focusedSlot = (this.focusedSlot + 1) % 3;
      this.render();
    }
  }

  render(errorBanner?: string, notice?: string): void {
    const example = this.current;
    if (!example) return;
    const ratedCount = [0, 1, 2]
      .filter((clueIndex) => this.ratings.has(clueIndex)).length;
    const cards = this.displayOrder.map((clueIndex, slot) => {
      const rating = this.ratings.get(clueIndex);
      const buttons = HUMAN_RATINGS.map((value) =>
        `<button data-slot="${slot}" data-rating="${value}"
                 class="rate${rating === value ? " active" : ""}">${value}</button>`,
      ).join("");
      return `
        <div class="clue-card${slot === this.focusedSlot ? " focused" : ""}"
             data-clue-index="${clueIndex}">
          <p class="clue-text">${escapeHtml(example.clues[clueIndex])}</p>
          <div class="rate-row">${buttons}</div>
          <span class="state">${rating ?? "unrated"}</span>
        </div>`;
    }).join("");

    this.root.innerHTML = `
      ${errorBanner ? `<div class="banner error">${escapeHtml(errorBanner)}</div>` : ""}
      ${notice ? `<div class="banner notice">${escapeHtml(notice)}</div>` : ""}
      <div class="item-head">
        <span class="category">${escapeHtml(example.category)}</span>
        <span class="keyword">${escapeHtml(example.keyword)}</span>
        <span class="progress">item ${this.index + 1}/${this.ids.length} ·
          rated ${ratedCount}/3</span>
      </div>
      <div class="context">${highlightKeyword(example.context, example.keyword)}</div>
      <div class="cards">${cards}</div>
      <div class="item-actions">
        <button class="skip">Skip item (S)</button>
        <span class="hint">A–E rate the focused clue · Tab moves focus ·
          arrows change item</span>
      </div>`;

    this.root.querySelectorAll<HTMLButtonElement>("button.rate")
      .forEach((button) => {
        button.addEventListener("click", () => {
          void this.rate(
            Number(button.dataset.slot),
            button.dataset.rating as RatingValue);
        });
      });
    this.root.querySelector<HTMLButtonElement>("button.skip")
      ?.addEventListener("click", () => void this.skipItem());
  }
}
