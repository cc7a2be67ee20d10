import type { App } from "../app.js";
import { el } from "../dom.js";
import { t } from "../strings.js";

export function renderMotivation(app: App): void {
  const start = el("button", { class: "primary", id: "start-button", text: t("motivation.start") });
  start.addEventListener("click", () =>
    void app.mutate(async () => {
      await app.api.advance(app.session.token!);
      await app.refresh();
    }),
  );
  app.root.append(
    el("section", { class: "motivation" }, [
      el("h1", { text: t("landing.headline") }),
      el("p", { text: t("motivation.body") }),
      start,
    ]),
  );
}
