import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "happy-dom",
    // the UI is served same-origin by the backend; tests mirror that
    environmentOptions: { happyDOM: { url: "http://127.0.0.1:8931" } },
    include: ["tests/**/*.test.ts"],
    testTimeout: 30_000,
    hookTimeout: 30_000,
  },
});
