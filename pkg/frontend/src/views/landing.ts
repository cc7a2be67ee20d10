/**
 * Landing page: the motivating question, a snapshot drop zone / file
 * picker, and a demo-profile shortcut. Rejected snapshots render the
 * server's validation findings inline.
 */

import type { App } from "../app.js";
import { ApiError } from "../api.js";
import { el, clear } from "../dom.js";
import { installDropZone, readSnapshotFile } from "../dropzone.js";
import { t } from "../strings.js";

export function renderLanding(app: App): void {
  const problems = el("div", { class: "landing-problems" });

  const fileInput = el("input", {
    type: "file",
    accept: "application/json,.json",
    id: "snapshot-file",
    class: "visually-hidden",
  });
  const pickLabel = el("label", { for: "snapshot-file", class: "link", text: t("landing.pick_file") });
  const dropZone = el("div", { class: "dropzone", id: "dropzone" }, [
    el("p", {}, [t("landing.drop_hint"), " ", pickLabel]),
    fileInput,
  ]);
  const demoButton = el("button", { class: "primary", id: "demo-button", text: t("landing.demo_button") });

  const startFromSnapshot = (snapshot: unknown) =>
    app.mutate(async () => {
      try {
        const created = await app.api.createSession({ snapshot });
        app.session.start(created.token, created.step);
        await app.refresh();
      } catch (error) {
        showProblem(problems, error);
      }
    });

  const startDemo = () =>
    app.mutate(async () => {
      try {
        const created = await app.api.createSession({ snapshot_path: "demo" });
        app.session.start(created.token, created.step);
        await app.refresh();
      } catch (error) {
        showProblem(problems, error);
      }
    });

  demoButton.addEventListener("click", () => void startDemo());
  fileInput.addEventListener("change", () => {
    const file = fileInput.files?.[0];
    if (file) void handleFile(file);
  });
  const removeDrop = installDropZone(dropZone, (file) => void handleFile(file));
  app.onCleanup(removeDrop);

  async function handleFile(file: File): Promise<void> {
    clear(problems);
    const snapshot = await readSnapshotFile(file);
    if (snapshot === null) {
      problems.append(el("p", { class: "error", text: t("landing.unreadable") }));
      return;
    }
    await startFromSnapshot(snapshot);
  }

  app.root.append(
    el("section", { class: "landing" }, [
      el("h1", { text: t("landing.headline") }),
      el("p", { class: "subtopic", text: t("landing.subtopic") }),
      dropZone,
      el("p", { class: "or", text: "or" }),
      demoButton,
      problems,
    ]),
  );
}

function showProblem(container: HTMLElement, error: unknown): void {
  clear(container);
  if (error instanceof ApiError && error.payload.code === "invalid_snapshot") {
    container.append(el("p", { class: "error", text: t("landing.invalid_snapshot") }));
    const report = error.payload.details["report"] as {
      violations?: { message: string }[];
    };
    const list = el("ul", { class: "findings" });
    for (const violation of report?.violations ?? []) {
      list.append(el("li", { text: violation.message }));
    }
    container.append(list);
  } else if (error instanceof ApiError) {
    container.append(el("p", { class: "error", text: error.payload.message }));
  } else {
    container.append(el("p", { class: "error", text: t("error.network") }));
  }
}
