import { ApiClient } from "./api.js";
import type { LayoutData, PlacementData } from "./types.js";

export type PuzzleView = "blocked" | "blank" | "solution";

interface CellInfo {
  letter: string;
  number: number | null;
}

export function cellMap(layout: LayoutData): Map<string, CellInfo> {
  const cells = new Map<string, CellInfo>();
  for (const placement of layout.placements) {
    const dr = placement.direction === "Across" ? 0 : 1;
    const dc = placement.direction === "Across" ? 1 : 0;
    for (let i = 0; i < placement.word.length; i++) {
      const key = `${placement.row + dr * i},${placement.col + dc * i}`;
      const existing = cells.get(key);
      cells.set(key, {
        letter: placement.word[i],
        number: i === 0
          ? placement.number
          : existing?.number ?? null,
      });
    }
  }
  return cells;
}

export function clueLists(layout: LayoutData): {
  across: PlacementData[];
  down: PlacementData[];
} {
  const sorted = (direction: "Across" | "Down") =>
    layout.placements
      .filter((p) => p.direction === direction)
      .sort((a, b) => (a.number ?? 0) - (b.number ?? 0));
  return { across: sorted("Across"), down: sorted("Down") };
}

/** Numbered grid preview with blocked/blank/solution views. */
export class PuzzlePreview {
  view: PuzzleView = "blank";
  layout: LayoutData | null = null;

  constructor(private api: ApiClient, private root: HTMLElement) {}

  async assembleFrom(entryIds: string[], seed = 0): Promise<void> {
    const response = await this.api.postPuzzle(entryIds, seed);
    this.layout = response.layout;
    this.render();
  }

  setView(view: PuzzleView): void {
    this.view = view;
    this.render();
  }

  render(): void {
    const layout = this.layout;
    if (!layout) {
      this.root.innerHTML = `<p class="empty">No puzzle assembled yet.</p>`;
      return;
    }
    const cells = cellMap(layout);
    const rows: string[] = [];
    for (let row = 0; row < layout.rows; row++) {
      const tds: string[] = [];
      for (let col = 0; col < layout.cols; col++) {
        const info = cells.get(`${row},${col}`);
        if (!info) {
          tds.push(`<td class="blocked"></td>`);
          continue;
        }
        const sup = this.view !== "blocked" && info.number !== null
          ? `<sup>${info.number}</sup>` : "";
        const letter = this.view === "solution" ? info.letter : "";
        tds.push(`<td class="cell">${sup}${letter}</td>`);
      }
      rows.push(`<tr>${tds.join("")}</tr>`);
    }
    const { across, down } = clueLists(layout);
    const list = (items: PlacementData[]) => items
      .map((p) => `<li><b>${p.number}.</b> ${escapeHtml(p.clue)}</li>`)
      .join("");
    const unplaced = layout.unplaced.length
      ? `<p class="unplaced">Unplaced: ${layout.unplaced
          .map(([keyword]) => escapeHtml(keyword)).join(", ")}</p>`
      : "";
    this.root.innerHTML = `
      <div class="view-toggle">
        ${(["blocked", "blank", "solution"] as PuzzleView[]).map((view) =>
          `<button data-view="${view}"
                   class="${view === this.view ? "active" : ""}">${view}</button>`,
        ).join("")}
      </div>
      <table class="grid">${rows.join("")}</table>
      <div class="clue-lists">
        <div><h3>Across</h3><ol class="across">${list(across)}</ol></div>
        <div><h3>Down</h3><ol class="down">${list(down)}</ol></div>
      </div>
      ${unplaced}`;
    this.root.querySelectorAll<HTMLButtonElement>("button[data-view]")
      .forEach((button) => button.addEventListener("click", () => {
        this.setView(button.dataset.view as PuzzleView);
      }));
  }
}

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;");
}
