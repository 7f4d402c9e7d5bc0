/**
 * DOM glue: binds the quiz controller to the page.
 *
 * Configuration is limited to the service base URL, taken from the `api`
 * query parameter or `window.SERVICE_BASE_URL`, defaulting to the page
 * origin (or localhost:8000 when opened from a file).
 */

import { ApiClient, ApiError } from "./api.js";
import { renderResultsChart } from "./chart.js";
import { QuizController } from "./quiz.js";
import { DETENTS, formatRatio, snapToDetent } from "./slider.js";
import { STRINGS } from "./strings.js";

declare global {
  interface Window {
    SERVICE_BASE_URL?: string;
  }
}

function serviceBaseUrl(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("api");
  if (fromQuery) return fromQuery;
  if (window.SERVICE_BASE_URL) return window.SERVICE_BASE_URL;
  if (window.location.protocol.startsWith("http")) return window.location.origin;
  return "http://127.0.0.1:8000";
}

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

const controller = new QuizController(new ApiClient(serviceBaseUrl()));

function setScreen(name: "intro" | "question" | "results"): void {
  for (const screen of ["intro", "question", "results"]) {
    $(`screen-${screen}`).hidden = screen !== name;
  }
}

function showError(message: string): void {
  const banner = $("error-banner");
  banner.textContent = message;
  banner.hidden = false;
}

function clearError(): void {
  $("error-banner").hidden = true;
}

function sliderPosition(): number {
  return snapToDetent(parseFloat(($("slider") as HTMLInputElement).value));
}

function renderQuestion(): void {
  const question = controller.question;
  if (!question) return;
  $("left-title").textContent = question.left.title;
  $("left-description").textContent = question.left.description;
  $("right-title").textContent = question.right.title;
  $("right-description").textContent = question.right.description;
  ($("slider") as HTMLInputElement).value = "0";
  renderPreview();
  setScreen("question");
}

function renderPreview(): void {
  const position = sliderPosition();
  const label = formatRatio(position);
  $("ratio-preview").textContent =
    position === 0 ? STRINGS.equalImpact : position > 0 ? `${STRINGS.sliderHintLeft} ${label}` : `${STRINGS.sliderHintRight} ${formatRatio(-position)}`;
}

function renderResults(): void {
  const summary = controller.results;
  if (!summary) return;
  $("chart-holder").innerHTML = renderResultsChart(summary);
  $("session-count").textContent = STRINGS.answersThisSession(summary.n_session_answers);
  $("total-count").textContent = STRINGS.totalAnswers(summary.n_total_observations);
  setScreen("results");
}

function afterStep(): void {
  if (controller.screen === "results") {
    renderResults();
  } else {
    renderQuestion();
  }
}

async function guard(action: () => Promise<void>): Promise<void> {
  try {
    clearError();
    await action();
  } catch (error) {
    if (error instanceof ApiError) {
      showError(error.message);
    } else {
      showError(STRINGS.networkError);
    }
  }
}

function wire(): void {
  $("app-title").textContent = STRINGS.appTitle;
  $("intro-text").textContent = STRINGS.intro;
  $("start-button").textContent = STRINGS.startButton;
  $("submit-button").textContent = STRINGS.submitButton;
  $("finish-button").textContent = STRINGS.finishButton;
  $("finish-button-results").textContent = STRINGS.playAgain;
  $("results-title").textContent = STRINGS.resultsTitle;
  $("results-legend").textContent = STRINGS.resultsLegend;

  const detentList = $("detents");
  for (const detent of DETENTS) {
    const option = document.createElement("option");
    option.value = String(detent.position);
    option.label = detent.label;
    detentList.appendChild(option);
  }

  $("start-button").addEventListener("click", () => guard(async () => {
    await controller.start();
    afterStep();
  }));

  $("slider").addEventListener("input", renderPreview);

  $("submit-button").addEventListener("click", () => guard(async () => {
    const outcome = await controller.submit(sliderPosition());
    if (outcome === "rejected" && controller.lastError) {
      // keep the slider as-is; the banner explains the rejection
      showError(controller.lastError.message);
      return;
    }
    afterStep();
  }));

  $("finish-button").addEventListener("click", () => guard(async () => {
    await controller.finish();
    renderResults();
  }));

  $("finish-button-results").addEventListener("click", () => guard(async () => {
    await controller.start();
    afterStep();
  }));

  setScreen("intro");
}

window.addEventListener("DOMContentLoaded", wire);
