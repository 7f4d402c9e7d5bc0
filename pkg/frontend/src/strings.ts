/** All user-facing copy in one place, ready for later translation. */

export const STRINGS = {
  appTitle: "How heavy is your carbon footprint?",
  intro:
    "Compare everyday actions two at a time. Slide toward the action you " +
    "believe emits more CO2, and by how much. Stop whenever you like to " +
    "see how everyone's answers compare with the measured values.",
  startButton: "Start comparing",
  submitButton: "Submit",
  finishButton: "Finish & see results",
  versus: "vs",
  sliderHintLeft: "left emits more",
  sliderHintRight: "right emits more",
  equalImpact: "equal impact",
  resultsTitle: "Perceived vs. true carbon footprint",
  resultsLegend: "circle = true value, diamond = what the population perceives",
  answersThisSession: (n: number) => `You answered ${n} question${n === 1 ? "" : "s"} this session.`,
  totalAnswers: (n: number) => `Estimates are built from ${n} comparisons overall.`,
  playAgain: "Start a new session",
  networkError: "Could not reach the server. Check your connection and retry.",
  retryButton: "Retry",
};
