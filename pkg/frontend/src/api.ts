/**
 * Typed client for the quiz service JSON API.
 */

export interface ActionCard {
  id: number;
  title: string;
  description: string;
}

export interface Question {
  pair: [number, number];
  left: ActionCard;
  right: ActionCard;
}

export interface ResultRow {
  id: number;
  perceived_kg: number;
  true_kg: number;
  log10_error: number;
}

export interface ResultsSummary {
  actions: ResultRow[];
  n_total_observations: number;
  n_session_answers: number;
}

export interface PerceptionRow {
  id: number;
  title: string;
  perceived_kg: number;
  true_kg: number;
}

export interface Perception {
  actions: PerceptionRow[];
  n_observations: number;
}

/** Error carrying the service's {code, message} payload. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function raiseForStatus(response: Response): Promise<void> {
  if (response.ok) {
    return;
  }
  let code = "http_error";
  let message = `${response.status} ${response.statusText}`;
  try {
    const body = await response.json();
    if (body && typeof body.code === "string") {
      code = body.code;
      message = body.message ?? message;
    }
  } catch {
    // non-JSON error body: keep the generic message
  }
  throw new ApiError(response.status, code, message);
}

export class ApiClient {
  constructor(readonly baseUrl: string) {}

  private url(path: string): string {
    return `${this.baseUrl.replace(/\/$/, "")}${path}`;
  }

  async createSession(seed?: number): Promise<string> {
    const response = await fetch(this.url("/api/sessions"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(seed === undefined ? {} : { seed }),
    });
    await raiseForStatus(response);
    return (await response.json()).session_id as string;
  }

  async getQuestion(sessionId: string): Promise<Question> {
    const response = await fetch(this.url(`/api/sessions/${sessionId}/question`));
    await raiseForStatus(response);
    return (await response.json()) as Question;
  }

  /** y is the impact ratio of pair[0] over pair[1]. */
  async submitAnswer(sessionId: string, pair: [number, number], y: number): Promise<void> {
    const response = await fetch(this.url(`/api/sessions/${sessionId}/answers`), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ pair, y }),
    });
    await raiseForStatus(response);
  }

  async finishSession(sessionId: string): Promise<ResultsSummary> {
    const response = await fetch(this.url(`/api/sessions/${sessionId}/finish`), { method: "POST" });
    await raiseForStatus(response);
    return (await response.json()) as ResultsSummary;
  }

  async perception(): Promise<Perception> {
    const response = await fetch(this.url("/api/perception"));
    await raiseForStatus(response);
    return (await response.json()) as Perception;
  }
}
