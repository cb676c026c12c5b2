/** Wire types mirroring the serve API payloads. */

export type RatingValue = "A" | "B" | "C" | "D" | "E" | "SKIP" | "EMPTY";

export const HUMAN_RATINGS: RatingValue[] = ["A", "B", "C", "D", "E"];

export interface ExampleRow {
  id: string;
  context: string;
  keyword: string;
  category: string;
  clues: string[];
  source_url: string;
}

export interface ExamplesPage {
  total: number;
  offset: number;
  limit: number;
  examples: ExampleRow[];
}

export interface RatingRecord {
  example_id: string;
  clue_index: number;
  rating: RatingValue;
  annotator: string;
  rated_at: string;
}

export interface SummaryResponse {
  total: number;
  counts: Record<RatingValue, number>;
  percent: Record<RatingValue, number>;
  percent_excluding_skip: Record<string, number>;
  acceptable_share: number;
  acceptable_share_excluding_skip: number;
}

export interface PlacementData {
  word: string;
  row: number;
  col: number;
  direction: "Across" | "Down";
  clue: string;
  number: number | null;
}

export interface LayoutData {
  rows: number;
  cols: number;
  placements: PlacementData[];
  unplaced: [string, string][];
}

export interface PuzzleResponse {
  id: string;
  layout: LayoutData;
  preview?: string;
}
