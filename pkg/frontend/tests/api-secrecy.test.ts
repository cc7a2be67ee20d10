import { describe, expect, it } from "vitest";

import { ApiError } from "../src/api.js";
import type { BattlePair, GalleryEntry, RoundView } from "../src/api.js";

// Compile-time guards: the round payload types carry no visibility data,
// so no client code path can render a tile's viewer status before the
// server reports the selection outcome. If anyone adds such a field,
// these lines stop compiling.
type Forbid<T, K extends string> = K extends keyof T ? never : true;

const galleryHasNoViewerFlag: Forbid<GalleryEntry, "is_viewer"> = true;
const galleryHasNoViewerSet: Forbid<GalleryEntry, "viewers"> = true;
const roundHasNoViewerData: Forbid<RoundView, "viewers"> = true;
const battleItemHasNoAudience: Forbid<BattlePair["item_a"], "audience"> = true;

describe("api types", () => {
  it("gallery and round types are closed to visibility data", () => {
    expect(galleryHasNoViewerFlag).toBe(true);
    expect(galleryHasNoViewerSet).toBe(true);
    expect(roundHasNoViewerData).toBe(true);
    expect(battleItemHasNoAudience).toBe(true);
  });

  it("ApiError exposes the server's code/message/details payload", () => {
    const error = new ApiError(409, {
      code: "wrong_step",
      message: "session is not in a game round",
      details: {},
    });
    expect(error.status).toBe(409);
    expect(error.payload.code).toBe("wrong_step");
    expect(error.message).toContain("game round");
  });
});
