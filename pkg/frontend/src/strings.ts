/**
 * Locale string table. Every user-visible string resolves through t(), and
 * the StringKey union makes a missing key a compile-time error, so an
 * incomplete table fails the build. English ships; further locales add a
 * table with the same keys.
 */

const EN = {
  "app.title": "PrivCheck",
  "landing.headline": "Do you know who can see your profile?",
  "landing.subtopic": "Playfully discover who can see your shared items",
  "landing.drop_hint": "Drop your profile snapshot here, or",
  "landing.pick_file": "choose a file",
  "landing.demo_button": "Play the demo profile",
  "landing.invalid_snapshot": "This profile cannot be played yet:",
  "landing.unreadable": "That file is not a readable profile snapshot.",

  "briefing.item_battle.title": "Step 1 - What matters most to you?",
  "briefing.item_battle.body":
    "You will see two of your shared items at a time, ten times. Pick the one that feels more personal. Your choices build a private sensitivity ranking of your items.",
  "briefing.game.title": "Step 2 - Find your audience",
  "briefing.game.body":
    "Five rounds. Each shows one of your sensitive items and twenty profile tiles. Select every person who can actually see that item. The clock eats 200 points a second, a wrong pick costs 1000 points and one of five hearts.",
  "briefing.score_feedback.title": "Step 3 - Your result",
  "briefing.score_feedback.body":
    "See how your score came together, how well your perception matched reality, and what to adjust.",
  "briefing.continue": "Continue",

  "motivation.start": "Start",
  "motivation.body":
    "Shared items stay visible long after you post them. This short game checks whether you still know who sees what, using nothing but a local snapshot of a profile. No data leaves this machine.",

  "battle.title": "Which is more personal?",
  "battle.counter": "Comparison {current} of {total}",
  "battle.hint": "Click a card, or use the left and right arrow keys.",

  "round.title": "Who can see this?",
  "round.counter": "Round {current} of {total}",
  "round.instruction": "Select everyone who can see this item.",
  "round.hearts_label": "Hearts",
  "round.score_label": "Score",
  "round.won": "Round won! {points} points",
  "round.lost": "Round lost. 0 points",

  "results.title": "Your result",
  "results.total_label": "Total score",
  "results.base_label": "Round scores",
  "results.bonus_label": "Friend list bonus",
  "results.penalty_label": "Public item penalty",
  "results.awareness_label": "Awareness index",
  "results.breakdown_title": "Round breakdown",
  "results.round_points": "{points} points",
  "results.wrong_picks": "Wrong picks",
  "results.missed_viewers": "Missed viewers",
  "results.none": "none",
  "results.recommendations_title": "Recommendations",
  "results.share_button": "Copy share message",
  "results.share_copied": "Copied!",
  "results.replay_button": "Play again",

  "recommendation.review_public_items.title": "Review your public items",
  "recommendation.create_friend_lists.title": "Create friend lists",
  "recommendation.use_targeted_sharing.title": "Share with smaller audiences",
  "recommendation.reconsider_friendship_semantics.title":
    "Rethink what “friend” means online",

  "smiley.sad": "Your privacy awareness needs attention.",
  "smiley.neutral": "Decent awareness, with room to improve.",
  "smiley.happy": "Great awareness of who sees your items!",

  "error.toast": "The server rejected that: {message}",
  "error.network": "Cannot reach the game server.",
} as const;

export type StringKey = keyof typeof EN;

type LocaleTable = Record<StringKey, string>;

const LOCALES: Record<string, LocaleTable> = { en: EN };

let activeLocale = "en";

export function setLocale(locale: string): void {
  if (!(locale in LOCALES)) {
    throw new Error(`unknown locale: ${locale}`);
  }
  activeLocale = locale;
}

export function t(key: StringKey, vars?: Record<string, string | number>): string {
  const table = LOCALES[activeLocale] ?? EN;
  let out: string = table[key];
  if (vars) {
    for (const [name, value] of Object.entries(vars)) {
      out = out.replaceAll(`{${name}}`, String(value));
    }
  }
  return out;
}

export function allStringKeys(): StringKey[] {
  return Object.keys(EN) as StringKey[];
}
