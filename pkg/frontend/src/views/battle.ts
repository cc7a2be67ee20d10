/**
 * Pairwise comparison screen: two item cards and an x-of-10 counter.
 * A click (or the left/right arrow keys) posts the winner; the server
 * answers with either the next pair or the step to move to.
 */

import type { App } from "../app.js";
import type { BattlePair, ItemView } from "../api.js";
import { el } from "../dom.js";
import { t } from "../strings.js";

export function renderBattle(app: App, pair: BattlePair): void {
  const counter = el("p", {
    class: "counter",
    id: "battle-counter",
    text: t("battle.counter", { current: pair.round_no, total: pair.rounds_total }),
  });

  const cardA = itemCard(pair.item_a, "battle-card-a");
  const cardB = itemCard(pair.item_b, "battle-card-b");
  let current = pair;

  const choose = (itemId: string) =>
    app.mutate(async () => {
      const outcome = await app.api.battleChoice(app.session.token!, itemId);
      if (outcome.done || !outcome.next) {
        await app.refresh();
        return;
      }
      current = outcome.next;
      counter.textContent = t("battle.counter", {
        current: current.round_no,
        total: current.rounds_total,
      });
      fillItemCard(cardA, current.item_a);
      fillItemCard(cardB, current.item_b);
    });

  cardA.addEventListener("click", () => void choose(current.item_a.id));
  cardB.addEventListener("click", () => void choose(current.item_b.id));

  const onKey = (event: KeyboardEvent) => {
    if (event.key === "ArrowLeft") void choose(current.item_a.id);
    if (event.key === "ArrowRight") void choose(current.item_b.id);
  };
  document.addEventListener("keydown", onKey);
  app.onCleanup(() => document.removeEventListener("keydown", onKey));

  app.root.append(
    el("section", { class: "battle" }, [
      el("h1", { text: t("battle.title") }),
      counter,
      el("div", { class: "battle-cards" }, [cardA, cardB]),
      el("p", { class: "hint", text: t("battle.hint") }),
    ]),
  );
}

function itemCard(item: ItemView, id: string): HTMLElement {
  const card = el("button", { class: "item-card", id });
  fillItemCard(card, item);
  return card;
}

function fillItemCard(card: HTMLElement, item: ItemView): void {
  card.textContent = "";
  card.setAttribute("data-item-id", item.id);
  if (item.kind === "picture") {
    card.append(el("div", { class: "picture-frame", text: "\u{1F5BC}" }));
  }
  card.append(el("p", { class: "item-content", text: item.content_ref }));
}
