/**
 * Quiz flow state machine, independent of the DOM.
 *
 * One question is in play at a time; while a submission is in flight all
 * further submits are ignored (no double-posting). When the service
 * reports the session exhausted, the controller finishes automatically
 * and the results become the current screen.
 */

import { ApiClient, ApiError, Question, ResultsSummary } from "./api.js";
import { ratioFromPosition } from "./slider.js";

export type Screen = "idle" | "question" | "results";

export interface SubmittedAnswer {
  pair: [number, number];
  y: number;
}

export class QuizController {
  sessionId: string | null = null;
  question: Question | null = null;
  results: ResultsSummary | null = null;
  screen: Screen = "idle";
  lastError: ApiError | null = null;
  inFlight = false;
  /** Answers actually acknowledged by the service, in order. */
  readonly submitted: SubmittedAnswer[] = [];

  constructor(private readonly api: ApiClient) {}

  async start(seed?: number): Promise<void> {
    this.sessionId = await this.api.createSession(seed);
    this.results = null;
    this.submitted.length = 0;
    await this.loadQuestion();
  }

  private requireSession(): string {
    if (!this.sessionId) {
      throw new Error("no active session");
    }
    return this.sessionId;
  }

  async loadQuestion(): Promise<void> {
    const sessionId = this.requireSession();
    try {
      this.question = await this.api.getQuestion(sessionId);
      this.screen = "question";
      this.lastError = null;
    } catch (error) {
      if (error instanceof ApiError && error.code === "exhausted") {
        await this.finish();
        return;
      }
      throw error;
    }
  }

  /**
   * Submit the displayed question at a slider position.
   *
   * The stated ratio is left-over-right: the pair is posted as
   * [left.id, right.id] with y = 10^(3 * position).
   */
  async submit(position: number): Promise<"advanced" | "finished" | "rejected"> {
    if (this.inFlight || !this.question) {
      return "rejected";
    }
    const sessionId = this.requireSession();
    const pair: [number, number] = [this.question.left.id, this.question.right.id];
    const y = ratioFromPosition(position);
    this.inFlight = true;
    try {
      await this.api.submitAnswer(sessionId, pair, y);
      this.submitted.push({ pair, y });
      this.lastError = null;
    } catch (error) {
      if (error instanceof ApiError) {
        // 422/409: keep the question on screen, surface the error inline
        this.lastError = error;
        return "rejected";
      }
      throw error;
    } finally {
      this.inFlight = false;
    }
    await this.loadQuestion();
    return this.screen === "results" ? "finished" : "advanced";
  }

  async finish(): Promise<ResultsSummary> {
    const sessionId = this.requireSession();
    this.results = await this.api.finishSession(sessionId);
    this.question = null;
    this.screen = "results";
    return this.results;
  }
}
