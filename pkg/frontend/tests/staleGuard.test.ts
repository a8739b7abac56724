import { describe, expect, it } from "vitest";

import { StaleGuard } from "../src/staleGuard.js";

function deferred<T>() {
  let resolve!: (value: T) => void;
  const promise = new Promise<T>((r) => (resolve = r));
  return { promise, resolve };
}

describe("StaleGuard", () => {
  it("admits responses arriving in order", () => {
    const guard = new StaleGuard();
    const a = guard.issue();
    const b = guard.issue();
    expect(guard.admit(a)).toBe(true);
    expect(guard.admit(b)).toBe(true);
  });

  it("drops an older response arriving after a newer one", () => {
    const guard = new StaleGuard();
    const first = guard.issue();
    const second = guard.issue();
    expect(guard.admit(second)).toBe(true);
    expect(guard.admit(first)).toBe(false);
  });

  it("a delayed response never regresses the rendered state", async () => {
    // Simulates the fit loop: request 1 is slow, request 2 is fast; the
    // display must keep request 2's payload after request 1 finally lands.
    const guard = new StaleGuard();
    let displayed = "";
    const slow = deferred<string>();
    const fast = deferred<string>();

    async function fitOnce(response: Promise<string>) {
      const ticket = guard.issue();
      const payload = await response;
      if (!guard.admit(ticket)) return;
      displayed = payload;
    }

    const call1 = fitOnce(slow.promise);
    const call2 = fitOnce(fast.promise);
    fast.resolve("fresh");
    await call2;
    expect(displayed).toBe("fresh");
    slow.resolve("stale");
    await call1;
    expect(displayed).toBe("fresh");
  });
});
