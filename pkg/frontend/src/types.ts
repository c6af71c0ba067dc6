// Shapes of the service's JSON bodies. The UI renders these verbatim;
// it never derives a probability on its own.

export type Distribution = Record<string, number>;

export interface Point {
  x: number;
  y: number;
}

export interface LayoutResponse {
  mode: string;
  countries: Record<string, [number, number]>;
}

export interface ClassifyResponse {
  distribution: Distribution;
  dropped_oov: string[];
  diagram_point: Point;
}

export interface HistoryEntry {
  replaced: string;
  replacement: string;
  distribution: Distribution;
  diagram_point: Point;
}

export interface SessionView {
  session_id: string;
  target: string;
  source: string;
  ingredients: string[];
  dropped_oov: string[];
  distribution: Distribution;
  diagram_point: Point;
  history: HistoryEntry[];
}

export interface SessionCreateResponse {
  session_id: string;
  state: SessionView;
}

export interface Suggestion {
  original: string;
  candidate: string;
  analogy_similarity: number;
  prob_target_after: number;
  prob_source_after: number;
}

export interface SuggestResponse {
  session_id: string;
  ingredient: string;
  suggestions: Suggestion[];
}

export interface Swap {
  replaced: string;
  replacement: string;
}
