import type {
  ExampleRow,
  ExamplesPage,
  PuzzleResponse,
  RatingRecord,
  RatingValue,
  SummaryResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

/** Thin fetch wrapper around the review service endpoints. */
export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchFn: typeof fetch = globalThis.fetch.bind(globalThis),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, init);
    const body = await response.json().catch(() => ({}));
    if (!response.ok) {
      const detail = (body as { error?: string }).error ?? response.statusText;
      throw new ApiError(response.status, detail);
    }
    return body as T;
  }

  listExamples(offset = 0, limit = 50): Promise<ExamplesPage> {
    return this.request(`/api/examples?offset=${offset}&limit=${limit}`);
  }

  getExample(id: string): Promise<ExampleRow> {
    return this.request(`/api/examples/${encodeURIComponent(id)}`);
  }

  postRating(
    exampleId: string,
    clueIndex: number,
    rating: RatingValue,
    annotator: string,
  ): Promise<{ record: RatingRecord }> {
    return this.request(`/api/ratings`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({
        example_id: exampleId,
        clue_index: clueIndex,
        rating,
        annotator,
      }),
    });
  }

  getSummary(annotator?: string): Promise<SummaryResponse> {
    const query = annotator ? `?annotator=${encodeURIComponent(annotator)}` : "";
    return this.request(`/api/summary${query}`);
  }

  /** Latest-per-key ledger view, optionally scoped to one example/annotator. */
  async getRatings(
    exampleId?: string,
    annotator?: string,
  ): Promise<RatingRecord[]> {
    const params = new URLSearchParams();
    if (exampleId) params.set("example_id", exampleId);
    if (annotator) params.set("annotator", annotator);
    const query = params.toString();
    const body = await this.request<{ records: RatingRecord[] }>(
      `/api/ratings${query ? `?${query}` : ""}`);
    return body.records;
  }

  postPuzzle(entryIds: string[], seed = 0): Promise<PuzzleResponse> {
    return this.request(`/api/puzzles`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ entries: entryIds, seed }),
    });
  }

  getPuzzle(id: string): Promise<PuzzleResponse> {
    return this.request(`/api/puzzles/${encodeURIComponent(id)}`);
  }
}
