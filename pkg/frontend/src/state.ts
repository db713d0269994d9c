/** Session state and the frame-request loop.
 *
 * Invariants enforced here:
 *  - the displayed frame is always a server response (single source of truth);
 *  - responses carry sequence numbers and a stale response (lower sequence
 *    than one already applied) is dropped, never displayed;
 *  - at most one frame request is in flight; the newest requested view
 *    supersedes any queued one.
 */

import { ApiClient, ServiceError } from "./api.js";
import type { EulerView, FrameDoc, KeyViewDoc, ModelDoc } from "./types.js";

export interface FrameEvent {
  seq: number;
  view: EulerView;
  frame: FrameDoc;
}

export interface ControllerEvents {
  /** A fresh (non-stale) frame arrived. */
  onFrame?: (ev: FrameEvent) => void;
  /** Blocking state such as needs_solve; null clears it. */
  onBanner?: (message: string | null) => void;
  /** Transient notice (duplicate key view, rejected edit, ...). */
  onNotice?: (message: string) => void;
  /** Key-view rotations changed (dots need redrawing). */
  onKeyViews?: (views: EulerView[]) => void;
}

export const FRONT_VIEW: EulerView = { yaw: 0, pitch: 0, roll: 0 };

export class SessionController {
  sessionId: string | null = null;
  view: EulerView = { ...FRONT_VIEW };
  quantize = 0;
  selectedPart: string | null = null;
  keyViews: EulerView[] = [];
  lastFrame: FrameDoc | null = null;
  lastFrameSeq = 0;

  private nextSeq = 0;
  private inFlight = false;
  private queuedView: EulerView | null = null;

  constructor(
    readonly api: ApiClient,
    private readonly events: ControllerEvents = {},
  ) {}

  /** Create a session from a model document and show its front-view state. */
  async load(model: ModelDoc): Promise<void> {
    const info = await this.api.createSession(model);
    this.sessionId = info.session_id;
    this.setKeyViews(model.key_views.map((kv) => eulerOf(kv)));
    this.view = { ...FRONT_VIEW };
    this.lastFrame = null;
    this.lastFrameSeq = 0;
  }

  /** Mouse drag on the view control: dx maps to yaw, dy to pitch; with the
   * modifier held, dx maps to roll instead. */
  drag(dx: number, dy: number, rollModifier = false): Promise<boolean> {
    const s = 0.5; // degrees per pixel
    const v = { ...this.view };
    if (rollModifier) {
      v.roll += s * dx;
    } else {
      v.yaw += s * dx;
      v.pitch += s * dy;
    }
    return this.setView(v);
  }

  /** Jump to an exact rotation (presets, key-view dots). */
  setView(view: EulerView): Promise<boolean> {
    this.view = { ...view };
    return this.requestFrame();
  }

  clickDot(index: number): Promise<boolean> {
    const v = this.keyViews[index];
    if (v === undefined) {
      return Promise.resolve(false);
    }
    return this.setView(v);
  }

  /** Ask for a frame at the current view, coalescing while one is in
   * flight. Resolves true once the view's frame (or a newer one) applied. */
  requestFrame(): Promise<boolean> {
    if (this.sessionId === null) {
      return Promise.resolve(false);
    }
    if (this.inFlight) {
      this.queuedView = { ...this.view };
      return Promise.resolve(false);
    }
    return this.launch({ ...this.view });
  }

  private async launch(view: EulerView): Promise<boolean> {
    const seq = ++this.nextSeq;
    this.inFlight = true;
    let applied = false;
    try {
      const frame = await this.api.frame(this.sessionId!, view, this.quantize);
      applied = this.apply(seq, view, frame);
      if (applied) {
        this.events.onBanner?.(null);
      }
    } catch (err) {
      if (err instanceof ServiceError && err.kind === "needs_solve") {
        this.events.onBanner?.("needs_solve: press Calc to update the model");
      } else {
        throw err;
      }
    } finally {
      this.inFlight = false;
      const queued = this.queuedView;
      this.queuedView = null;
      if (queued !== null) {
        void this.launch(queued);
      }
    }
    return applied;
  }

  /** Apply a frame response; drops it when something newer already showed. */
  apply(seq: number, view: EulerView, frame: FrameDoc): boolean {
    if (seq <= this.lastFrameSeq) {
      return false;
    }
    this.lastFrameSeq = seq;
    this.lastFrame = frame;
    this.events.onFrame?.({ seq, view, frame });
    return true;
  }

  /** Toolbar Add: author the current server frame as a new key view. */
  async addKeyFromFrame(): Promise<boolean> {
    if (this.sessionId === null || this.lastFrame === null) {
      return false;
    }
    const doc: KeyViewDoc = { view: { ...this.view }, parts: {} };
    for (const part of this.lastFrame.parts) {
      doc.parts[part.part_id] = {
        anchor: part.position,
        vertices: part.vertices.map(([x, y]) => [
          x - part.position[0],
          y - part.position[1],
        ]),
        color: part.color,
      };
    }
    return this.addKeyView(doc);
  }

  /** Add an explicit authored key view. */
  async addKeyView(doc: KeyViewDoc): Promise<boolean> {
    try {
      await this.api.addKeyView(this.sessionId!, doc);
    } catch (err) {
      if (err instanceof ServiceError && err.status === 409) {
        this.events.onNotice?.(err.message);
        return false;
      }
      throw err;
    }
    this.setKeyViews([...this.keyViews, eulerOf(doc)]);
    return true;
  }

  async deleteLatestKey(): Promise<boolean> {
    try {
      await this.api.deleteLatestKeyView(this.sessionId!);
    } catch (err) {
      if (err instanceof ServiceError && err.status === 409) {
        this.events.onNotice?.(err.message);
        return false;
      }
      throw err;
    }
    this.setKeyViews(this.keyViews.slice(0, -1));
    return true;
  }

  /** Toolbar Calc: solve, refresh the dots, and request a fresh frame. */
  async calc(): Promise<void> {
    const diagnostics = await this.api.solve(this.sessionId!);
    const worst = Math.max(0, ...Object.values(diagnostics.residuals));
    this.events.onNotice?.(`solved (max residual ${worst.toExponential(2)})`);
    const model = await this.api.getModel(this.sessionId!);
    this.setKeyViews(model.key_views.map((kv) => eulerOf(kv)));
    await this.requestFrame();
  }

  private setKeyViews(views: EulerView[]): void {
    this.keyViews = views;
    this.events.onKeyViews?.(views);
  }
}

function eulerOf(kv: { view: EulerView }): EulerView {
  return { yaw: kv.view.yaw, pitch: kv.view.pitch, roll: kv.view.roll };
}
