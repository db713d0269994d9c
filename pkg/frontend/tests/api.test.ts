import { describe, expect, it } from "vitest";

import { ApiClient, ServiceError } from "../src/api.js";
import type { FetchLike, } from "../src/api.js";
import type { ModelDoc } from "../src/types.js";

interface Call {
  url: string;
  init: RequestInit | undefined;
}

/** Records every request and replays a scripted JSON response. */
function scripted(
  responses: Array<{ status?: number; body?: unknown; raw?: string }>,
): { calls: Call[]; fetchFn: FetchLike } {
  const calls: Call[] = [];
  const fetchFn: FetchLike = (url, init) => {
    calls.push({ url, init });
    const r = responses[Math.min(calls.length - 1, responses.length - 1)];
    const body = r.raw ?? JSON.stringify(r.body ?? {});
    return Promise.resolve(
      new Response(body, {
        status: r.status ?? 200,
        headers: { "content-type": "application/json" },
      }),
    );
  };
  return { calls, fetchFn };
}

const MODEL: ModelDoc = { format_version: 1, parts: [], key_views: [] };

describe("ApiClient request shapes", () => {
  it("creates a session with a POSTed model document", async () => {
    const { calls, fetchFn } = scripted([
      { status: 201, body: { session_id: "s1", key_view_count: 0 } },
    ]);
    const api = new ApiClient("http://host:1", fetchFn);
    const info = await api.createSession(MODEL);
    expect(info.session_id).toBe("s1");
    expect(calls[0].url).toBe("http://host:1/session");
    expect(calls[0].init?.method).toBe("POST");
    expect(JSON.parse(calls[0].init?.body as string)).toEqual(MODEL);
  });

  it("GETs the model export", async () => {
    const { calls, fetchFn } = scripted([{ body: MODEL }]);
    await new ApiClient("http://host:1", fetchFn).getModel("s2");
    expect(calls[0].url).toBe("http://host:1/session/s2/model");
    expect(calls[0].init).toBeUndefined();
  });

  it("DELETEs the latest key view", async () => {
    const { calls, fetchFn } = scripted([{ body: { key_view_count: 1 } }]);
    await new ApiClient("http://host:1", fetchFn).deleteLatestKeyView("s1");
    expect(calls[0].url).toBe("http://host:1/session/s1/keyview/latest");
    expect(calls[0].init?.method).toBe("DELETE");
  });

  it("solves with an empty POST", async () => {
    const { calls, fetchFn } = scripted([
      { body: { residuals: {}, distortion_norms: {} } },
    ]);
    await new ApiClient("http://host:1", fetchFn).solve("s1");
    expect(calls[0].url).toBe("http://host:1/session/s1/solve");
    expect(calls[0].init?.method).toBe("POST");
    expect(calls[0].init?.body).toBeUndefined();
  });

  it("requests frames with all four angles in the query string", async () => {
    const { calls, fetchFn } = scripted([
      { body: { parts: [], draw_order: [] } },
    ]);
    const api = new ApiClient("http://host:1", fetchFn);
    await api.frame("s1", { yaw: 10.5, pitch: -5, roll: 0 }, 10);
    expect(calls[0].url).toBe(
      "http://host:1/session/s1/frame?yaw=10.5&pitch=-5&roll=0&quantize=10",
    );
  });

  it("defaults the frame quantization to zero", async () => {
    const { calls, fetchFn } = scripted([
      { body: { parts: [], draw_order: [] } },
    ]);
    await new ApiClient("http://host:1", fetchFn).frame("s1", {
      yaw: 0,
      pitch: 0,
      roll: 0,
    });
    expect(calls[0].url).toContain("quantize=0");
  });

  it("PUTs part edits with the part id escaped for the path", async () => {
    const { calls, fetchFn } = scripted([{ body: { ok: true } }]);
    const api = new ApiClient("http://host:1", fetchFn);
    const record = {
      anchor: [0, 0] as [number, number],
      vertices: [] as [number, number][],
      color: [0, 0, 0, 1] as [number, number, number, number],
    };
    await api.editPart("s1", 'ear "left" & <tufted>', 2, record);
    expect(calls[0].url).toBe(
      "http://host:1/session/s1/part/ear%20%22left%22%20%26%20%3Ctufted%3E/keyview/2",
    );
    expect(calls[0].init?.method).toBe("PUT");
    expect(JSON.parse(calls[0].init?.body as string)).toEqual(record);
  });
});

describe("ApiClient error mapping", () => {
  it("decodes structured error bodies into ServiceError", async () => {
    const { fetchFn } = scripted([
      {
        status: 409,
        body: { error: "needs_solve", detail: "solve the session first" },
      },
    ]);
    const api = new ApiClient("http://host:1", fetchFn);
    const err = await api
      .frame("s1", { yaw: 0, pitch: 0, roll: 0 })
      .then(() => null, (e: unknown) => e);
    expect(err).toBeInstanceOf(ServiceError);
    const se = err as ServiceError;
    expect(se.status).toBe(409);
    expect(se.kind).toBe("needs_solve");
    expect(se.message).toBe("needs_solve: solve the session first");
  });

  it("falls back to the HTTP status for non-JSON error bodies", async () => {
    const { fetchFn } = scripted([{ status: 502, raw: "<html>bad</html>" }]);
    const api = new ApiClient("http://host:1", fetchFn);
    const err = await api.health().then(() => null, (e: unknown) => e);
    expect(err).toBeInstanceOf(ServiceError);
    expect((err as ServiceError).status).toBe(502);
    expect((err as ServiceError).kind).toBe("HTTP 502");
  });

  it("passes 2xx bodies through untouched", async () => {
    const { fetchFn } = scripted([
      { body: { status: "ok", sessions: 3 } },
    ]);
    const api = new ApiClient("http://host:1", fetchFn);
    await expect(api.health()).resolves.toEqual({ status: "ok", sessions: 3 });
  });
});
