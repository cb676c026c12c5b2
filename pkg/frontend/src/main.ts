import { ApiClient } from "./api.js";
import { Dashboard } from "./dashboard.js";
import { PuzzlePreview } from "./puzzle.js";
import { ReviewController } from "./review.js";

export function bootstrap(
  root: HTMLElement,
  api: ApiClient,
  annotator: string,
  sessionSeed: number,
): { review: ReviewController; dashboard: Dashboard; puzzle: PuzzlePreview } {
  root.innerHTML = `
    <nav class="tabs">
      <button data-tab="review" class="active">Review</button>
      <button data-tab="dashboard">Dashboard</button>
      <button data-tab="puzzle">Puzzle</button>
    </nav>
    <section id="tab-review" tabindex="0"></section>
    <section id="tab-dashboard" hidden></section>
    <section id="tab-puzzle" hidden>
      <form id="puzzle-form">
        <label>Example ids (comma separated, empty = first 8):
          <input type="text" id="puzzle-ids" size="60"></label>
        <label>Seed: <input type="number" id="puzzle-seed" value="7"></label>
        <button type="submit">Assemble</button>
      </form>
      <div id="puzzle-view"></div>
    </section>`;

  const review = new ReviewController(
    api,
    root.querySelector("#tab-review") as HTMLElement,
    { annotator, sessionSeed });
  const dashboard = new Dashboard(
    api, root.querySelector("#tab-dashboard") as HTMLElement);
  const puzzle = new PuzzlePreview(
    api, root.querySelector("#puzzle-view") as HTMLElement);

  root.querySelectorAll<HTMLButtonElement>("nav.tabs button")
    .forEach((button) => button.addEventListener("click", () => {
      root.querySelectorAll("nav.tabs button")
        .forEach((b) => b.classList.toggle("active", b === button));
      for (const name of ["review", "dashboard", "puzzle"]) {
        const section = root.querySelector<HTMLElement>(`#tab-${name}`);
        if (section) section.hidden = name !== button.dataset.tab;
      }
      if (button.dataset.tab === "dashboard") void dashboard.refresh();
    }));

  const form = root.querySelector<HTMLFormElement>("#puzzle-form");
  form?.addEventListener("submit", (event) => {
    event.preventDefault();
    const raw = (root.querySelector("#puzzle-ids") as HTMLInputElement).value;
    const seed = Number(
      (root.querySelector("#puzzle-seed") as HTMLInputElement).value) || 0;
    const ids = raw.split(",").map((s) => s.trim()).filter(Boolean);
    void (async () => {
      const chosen = ids.length > 0
        ? ids
        : (await api.listExamples(0, 8)).examples.map((e) => e.id);
      await puzzle.assembleFrom(chosen, seed);
    })();
  });

  return { review, dashboard, puzzle };
}

function annotatorName(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("annotator");
  if (fromQuery) return fromQuery;
  const entered = window.prompt("Annotator name:", "anonymous");
  return entered || "anonymous";
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  const api = new ApiClient("");
  const { review } = bootstrap(
    document.getElementById("app") as HTMLElement,
    api,
    annotatorName(),
    Date.now() % 100000);
  void review.start();
}
