/**
 * A timed guessing round: the item on the left, twenty person tiles on
 * the right (names on hover), a live score countdown, and five hearts.
 * Correct picks frame green, wrong picks frame red; the view refreshes
 * itself when the round is decided or the local countdown hits zero.
 */

import type { App } from "../app.js";
import type { RoundView } from "../api.js";
import { el, initials } from "../dom.js";
import { t } from "../strings.js";
import { anchor, displayedScore, reconcile, type TickerAnchor } from "../ticker.js";

export function renderRound(app: App, view: RoundView): void {
  app.session.rememberNames(view.gallery);

  let ticker: TickerAnchor = anchor(view.score, app.now());
  let decided = false;

  const scoreValue = el("span", { class: "score-value", id: "round-score", text: String(view.score) });
  const heartsRow = el("span", { class: "hearts", id: "round-hearts" });
  drawHearts(heartsRow, view.hearts);

  const itemPane = el("div", { class: "round-item" }, [
    el("h2", { text: t("round.title") }),
    el("p", {
      class: "counter",
      id: "round-counter",
      text: t("round.counter", { current: view.round_no, total: view.rounds_total }),
    }),
    view.item.kind === "picture"
      ? el("div", { class: "picture-frame large", text: "\u{1F5BC}" })
      : el("div", {}),
    el("p", { class: "item-content", text: view.item.content_ref }),
    el("p", { class: "instruction", text: t("round.instruction") }),
  ]);

  const grid = el("div", { class: "gallery", id: "round-gallery" });
  for (const entry of view.gallery) {
    const tile = el("button", {
      class: "tile",
      title: entry.display_name,
      "data-person-id": entry.person_id,
      "aria-label": entry.display_name,
    });
    if (entry.avatar_ref) {
      tile.append(el("img", { src: entry.avatar_ref, alt: "" }));
    } else {
      tile.append(el("span", { class: "tile-initials", text: initials(entry.display_name) }));
    }
    tile.addEventListener("click", () => void pick(entry.person_id, tile));
    grid.append(tile);
  }

  const banner = el("p", { class: "round-banner", id: "round-banner" });

  const pick = (personId: string, tile: HTMLElement) =>
    app.mutate(async () => {
      if (decided || tile.classList.contains("green") || tile.classList.contains("red")) return;
      const outcome = await app.api.roundSelect(app.session.token!, personId);
      tile.classList.add(outcome.frame);
      ticker = reconcile(ticker, outcome.score, app.now());
      scoreValue.textContent = String(outcome.score);
      drawHearts(heartsRow, outcome.hearts);
      if (outcome.outcome === "won_round") {
        decided = true;
        banner.textContent = t("round.won", { points: outcome.score });
        scheduleNavigate();
      } else if (outcome.outcome === "lost_round") {
        decided = true;
        banner.textContent = t("round.lost");
        scheduleNavigate();
      }
    });

  function scheduleNavigate(): void {
    const timer = setTimeout(() => void app.refresh(), app.navigateDelayMs);
    app.onCleanup(() => clearTimeout(timer));
  }

  const interval = setInterval(() => {
    if (decided) return;
    const score = displayedScore(ticker, app.now());
    scoreValue.textContent = String(score);
    if (score <= 0) {
      // server settles the time-out; refresh shows the next step
      decided = true;
      banner.textContent = t("round.lost");
      scheduleNavigate();
    }
  }, 250);
  app.onCleanup(() => clearInterval(interval));

  app.root.append(
    el("section", { class: "round" }, [
      itemPane,
      el("div", { class: "round-play" }, [
        el("div", { class: "round-status" }, [
          el("span", { text: `${t("round.score_label")}: ` }),
          scoreValue,
          el("span", { text: ` ${t("round.hearts_label")}: ` }),
          heartsRow,
        ]),
        grid,
        banner,
      ]),
    ]),
  );
}

function drawHearts(row: HTMLElement, hearts: number): void {
  row.textContent = "";
  for (let i = 0; i < 5; i += 1) {
    row.append(
      el("span", {
        class: i < hearts ? "heart" : "heart lost",
        text: i < hearts ? "♥" : "♡",
      }),
    );
  }
  row.setAttribute("data-hearts", String(hearts));
}
