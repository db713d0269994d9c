import { describe, expect, it } from "vitest";

import type { ApiClient } from "../src/api.js";
import { ServiceError } from "../src/api.js";
import { FRONT_VIEW, SessionController } from "../src/state.js";
import type { ControllerEvents, FrameEvent } from "../src/state.js";
import type {
  EulerView,
  FrameDoc,
  KeyViewDoc,
  ModelDoc,
} from "../src/types.js";

function frameFor(view: EulerView): FrameDoc {
  return {
    parts: [
      {
        part_id: "body",
        position: [view.yaw, view.pitch],
        depth: 0,
        color: [1, 0, 0, 1],
        vertices: [
          [view.yaw - 1, view.pitch],
          [view.yaw + 1, view.pitch],
          [view.yaw, view.pitch + 1],
        ],
      },
    ],
    draw_order: [0],
  };
}

interface Deferred<T> {
  promise: Promise<T>;
  resolve: (value: T) => void;
  reject: (err: unknown) => void;
}

function deferred<T>(): Deferred<T> {
  let resolve!: (value: T) => void;
  let reject!: (err: unknown) => void;
  const promise = new Promise<T>((res, rej) => {
    resolve = res;
    reject = rej;
  });
  return { promise, resolve, reject };
}

function flush(): Promise<void> {
  return new Promise((res) => setTimeout(res, 0));
}

const MODEL: ModelDoc = {
  format_version: 1,
  parts: [{ part_id: "body", vertex_count: 3, triangles: [[0, 1, 2]] }],
  key_views: [
    { view: { yaw: 0, pitch: 0, roll: 0 }, parts: {} },
    { view: { yaw: 90, pitch: 0, roll: 0 }, parts: {} },
  ],
};

/** In-memory stand-in for the HTTP client; frame responses are manual. */
class FakeApi {
  frameCalls: Array<{ view: EulerView; quantize: number }> = [];
  pendingFrames: Array<Deferred<FrameDoc>> = [];
  autoRespond = false;
  failFramesWith: ServiceError | null = null;
  inFlightNow = 0;
  maxInFlight = 0;
  addedKeyViews: KeyViewDoc[] = [];
  rejectNextAdd: ServiceError | null = null;
  rejectNextDelete: ServiceError | null = null;
  solveCount = 0;
  exportedModel: ModelDoc = MODEL;

  createSession(model: ModelDoc) {
    this.exportedModel = model;
    return Promise.resolve({
      session_id: "s1",
      key_view_count: model.key_views.length,
    });
  }

  async frame(_id: string, view: EulerView, quantize = 0): Promise<FrameDoc> {
    this.frameCalls.push({ view: { ...view }, quantize });
    this.inFlightNow += 1;
    this.maxInFlight = Math.max(this.maxInFlight, this.inFlightNow);
    try {
      if (this.failFramesWith !== null) {
        throw this.failFramesWith;
      }
      if (this.autoRespond) {
        await flush(); // simulate network latency
        return frameFor(view);
      }
      const d = deferred<FrameDoc>();
      this.pendingFrames.push(d);
      return await d.promise;
    } finally {
      this.inFlightNow -= 1;
    }
  }

  addKeyView(_id: string, doc: KeyViewDoc) {
    if (this.rejectNextAdd !== null) {
      const err = this.rejectNextAdd;
      this.rejectNextAdd = null;
      return Promise.reject(err);
    }
    this.addedKeyViews.push(doc);
    return Promise.resolve({ key_view_count: this.addedKeyViews.length });
  }

  deleteLatestKeyView(_id: string) {
    if (this.rejectNextDelete !== null) {
      const err = this.rejectNextDelete;
      this.rejectNextDelete = null;
      return Promise.reject(err);
    }
    return Promise.resolve({ key_view_count: 0 });
  }

  solve(_id: string) {
    this.solveCount += 1;
    return Promise.resolve({
      residuals: { body: 1.5e-13, eye: 2.5e-14 },
      distortion_norms: { body: [0], eye: [0] },
    });
  }

  getModel(_id: string): Promise<ModelDoc> {
    return Promise.resolve(this.exportedModel);
  }
}

function controllerWith(events: ControllerEvents = {}) {
  const api = new FakeApi();
  const controller = new SessionController(
    api as unknown as ApiClient,
    events,
  );
  return { api, controller };
}

async function loaded(events: ControllerEvents = {}) {
  const made = controllerWith(events);
  await made.controller.load(MODEL);
  return made;
}

describe("loading", () => {
  it("creates a session and shows the model's key views as dots", async () => {
    const keyViewEvents: EulerView[][] = [];
    const { controller } = await loaded({
      onKeyViews: (views) => keyViewEvents.push(views),
    });
    expect(controller.sessionId).toBe("s1");
    expect(controller.view).toEqual(FRONT_VIEW);
    expect(controller.keyViews).toEqual([
      { yaw: 0, pitch: 0, roll: 0 },
      { yaw: 90, pitch: 0, roll: 0 },
    ]);
    expect(keyViewEvents).toHaveLength(1);
  });

  it("does not request frames before a session exists", async () => {
    const { api, controller } = controllerWith();
    await expect(controller.requestFrame()).resolves.toBe(false);
    expect(api.frameCalls).toHaveLength(0);
  });
});

describe("frame sequencing", () => {
  it("drops a response whose sequence is older than the displayed one", async () => {
    const shown: FrameEvent[] = [];
    const { controller } = await loaded({ onFrame: (ev) => shown.push(ev) });
    const newer = frameFor({ yaw: 5, pitch: 0, roll: 0 });
    const older = frameFor({ yaw: 1, pitch: 0, roll: 0 });
    expect(controller.apply(2, { yaw: 5, pitch: 0, roll: 0 }, newer)).toBe(true);
    expect(controller.apply(1, { yaw: 1, pitch: 0, roll: 0 }, older)).toBe(false);
    expect(controller.lastFrame).toEqual(newer);
    expect(shown).toHaveLength(1);
    expect(shown[0].seq).toBe(2);
  });

  it("keeps at most one request in flight and coalesces to the newest view", async () => {
    const shown: FrameEvent[] = [];
    const { api, controller } = await loaded({
      onFrame: (ev) => shown.push(ev),
    });

    const first = controller.drag(10, 0); // yaw 5, launches
    const second = controller.drag(10, 0); // yaw 10, queued
    const third = controller.drag(0, 10); // pitch 5, supersedes the queue
    await expect(second).resolves.toBe(false);
    await expect(third).resolves.toBe(false);
    expect(api.frameCalls).toHaveLength(1);
    expect(api.frameCalls[0].view).toEqual({ yaw: 5, pitch: 0, roll: 0 });

    api.pendingFrames[0].resolve(frameFor(api.frameCalls[0].view));
    await expect(first).resolves.toBe(true);
    await flush();

    // the queued launch asked only for the newest view, skipping yaw 10/pitch 0
    expect(api.frameCalls).toHaveLength(2);
    expect(api.frameCalls[1].view).toEqual({ yaw: 10, pitch: 5, roll: 0 });
    api.pendingFrames[1].resolve(frameFor(api.frameCalls[1].view));
    await flush();

    expect(shown.map((ev) => ev.seq)).toEqual([1, 2]);
    expect(api.maxInFlight).toBe(1);
    expect(controller.lastFrame!.parts[0].position).toEqual([10, 5]);
  });

  it("renders a 30-event drag burst in order with no stale frame shown", async () => {
    const shown: FrameEvent[] = [];
    const { api, controller } = await loaded({
      onFrame: (ev) => shown.push(ev),
    });
    api.autoRespond = true;

    for (let i = 0; i < 30; i++) {
      void controller.drag(2, 1);
    }
    while (controller.lastFrame?.parts[0].position[0] !== 30) {
      await flush();
    }

    expect(controller.view).toEqual({ yaw: 30, pitch: 15, roll: 0 });
    const seqs = shown.map((ev) => ev.seq);
    for (let i = 1; i < seqs.length; i++) {
      expect(seqs[i]).toBeGreaterThan(seqs[i - 1]);
    }
    expect(api.maxInFlight).toBe(1);
    expect(api.frameCalls.length).toBeLessThanOrEqual(30);
    const last = api.frameCalls[api.frameCalls.length - 1];
    expect(last.view).toEqual({ yaw: 30, pitch: 15, roll: 0 });
    expect(shown[shown.length - 1].frame.parts[0].position).toEqual([30, 15]);
  });

  it("maps plain drags to yaw/pitch and modified drags to roll", async () => {
    const { api, controller } = await loaded();
    api.autoRespond = true;
    await controller.drag(10, -4);
    expect(controller.view).toEqual({ yaw: 5, pitch: -2, roll: 0 });
    await controller.drag(8, 100, true);
    expect(controller.view).toEqual({ yaw: 5, pitch: -2, roll: 4 });
    expect(api.frameCalls.map((c) => c.view)).toEqual([
      { yaw: 5, pitch: -2, roll: 0 },
      { yaw: 5, pitch: -2, roll: 4 },
    ]);
  });

  it("jumps to a key view when its dot is clicked", async () => {
    const { api, controller } = await loaded();
    api.autoRespond = true;
    await expect(controller.clickDot(1)).resolves.toBe(true);
    expect(controller.view).toEqual({ yaw: 90, pitch: 0, roll: 0 });
    await expect(controller.clickDot(7)).resolves.toBe(false);
    expect(api.frameCalls).toHaveLength(1);
  });

  it("passes the quantization step through to every request", async () => {
    const { api, controller } = await loaded();
    api.autoRespond = true;
    controller.quantize = 10;
    await controller.requestFrame();
    expect(api.frameCalls[0].quantize).toBe(10);
  });
});

describe("needs_solve handling", () => {
  it("raises the banner on 409 and clears it after a good frame", async () => {
    const banners: Array<string | null> = [];
    const { api, controller } = await loaded({
      onBanner: (msg) => banners.push(msg),
    });
    api.failFramesWith = new ServiceError(409, "needs_solve", "solve first");
    await controller.requestFrame();
    expect(banners).toHaveLength(1);
    expect(banners[0]).toContain("needs_solve");

    api.failFramesWith = null;
    api.autoRespond = true;
    await controller.requestFrame();
    expect(banners[banners.length - 1]).toBeNull();
  });

  it("rethrows unexpected frame errors", async () => {
    const { api, controller } = await loaded();
    api.failFramesWith = new ServiceError(500, "boom", "exploded");
    await expect(controller.requestFrame()).rejects.toThrow("boom: exploded");
  });
});

describe("key-view editing", () => {
  it("authors the displayed frame as a new key view", async () => {
    const { api, controller } = await loaded();
    api.autoRespond = true;
    await controller.setView({ yaw: 40, pitch: 0, roll: 0 });
    await expect(controller.addKeyFromFrame()).resolves.toBe(true);

    expect(api.addedKeyViews).toHaveLength(1);
    const doc = api.addedKeyViews[0];
    expect(doc.view).toEqual({ yaw: 40, pitch: 0, roll: 0 });
    // anchor comes from the world position; vertices go back to local
    expect(doc.parts.body.anchor).toEqual([40, 0]);
    expect(doc.parts.body.vertices).toEqual([
      [-1, 0],
      [1, 0],
      [0, 1],
    ]);
    expect(controller.keyViews).toHaveLength(3);
  });

  it("cannot author a key view before any frame is shown", async () => {
    const { api, controller } = await loaded();
    await expect(controller.addKeyFromFrame()).resolves.toBe(false);
    expect(api.addedKeyViews).toHaveLength(0);
  });

  it("surfaces duplicate-rotation rejections without changing the dots", async () => {
    const notices: string[] = [];
    const { api, controller } = await loaded({
      onNotice: (msg) => notices.push(msg),
    });
    api.rejectNextAdd = new ServiceError(
      409,
      "DuplicateKeyView",
      "rotation already authored",
    );
    const doc: KeyViewDoc = { view: { yaw: 0, pitch: 0, roll: 0 }, parts: {} };
    await expect(controller.addKeyView(doc)).resolves.toBe(false);
    expect(notices[0]).toContain("DuplicateKeyView");
    expect(controller.keyViews).toHaveLength(2);
  });

  it("deletes the latest key view and its dot", async () => {
    const { controller } = await loaded();
    await expect(controller.deleteLatestKey()).resolves.toBe(true);
    expect(controller.keyViews).toEqual([{ yaw: 0, pitch: 0, roll: 0 }]);
  });

  it("surfaces an empty-model deletion as a notice", async () => {
    const notices: string[] = [];
    const { api, controller } = await loaded({
      onNotice: (msg) => notices.push(msg),
    });
    api.rejectNextDelete = new ServiceError(409, "EmptyModel", "none left");
    await expect(controller.deleteLatestKey()).resolves.toBe(false);
    expect(notices[0]).toContain("EmptyModel");
    expect(controller.keyViews).toHaveLength(2);
  });
});

describe("calc", () => {
  it("solves, reports the worst residual, refreshes dots, and redraws", async () => {
    const notices: string[] = [];
    const { api, controller } = await loaded({
      onNotice: (msg) => notices.push(msg),
    });
    api.autoRespond = true;
    api.exportedModel = {
      ...MODEL,
      key_views: [
        ...MODEL.key_views,
        { view: { yaw: 45, pitch: 10, roll: 0 }, parts: {} },
      ],
    };
    await controller.calc();
    expect(api.solveCount).toBe(1);
    expect(notices[0]).toContain("1.50e-13"); // max of the two residuals
    expect(controller.keyViews).toHaveLength(3);
    expect(api.frameCalls).toHaveLength(1);
  });
});
