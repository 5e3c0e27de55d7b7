import { describe, expect, it } from "vitest";

import { ApiClient, ApiRequestError, type FetchLike } from "../src/api.js";

interface Seen {
  url: string;
  method: string;
  body?: unknown;
}

function capture(status = 200, body: unknown = {}): { seen: Seen[]; fetch: FetchLike } {
  const seen: Seen[] = [];
  const fetchFn: FetchLike = async (input, init) => {
    seen.push({
      url: input,
      method: init?.method ?? "GET",
      body: init?.body ? JSON.parse(String(init.body)) : undefined,
    });
    return new Response(JSON.stringify(body), {
      status,
      headers: { "content-type": "application/json" },
    });
  };
  return { seen, fetch: fetchFn };
}

describe("ApiClient request shapes", () => {
  it("lists datasets", async () => {
    const { seen, fetch } = capture(200, []);
    await new ApiClient("http://svc", fetch).listDatasets();
    expect(seen[0]).toEqual({ url: "http://svc/v1/datasets", method: "GET", body: undefined });
  });

  it("creates sessions with the dataset id", async () => {
    const { seen, fetch } = capture(201, { session_id: "s", dataset_id: "d", revision: 0 });
    await new ApiClient("http://svc/", fetch).createSession("d");
    expect(seen[0]).toEqual({
      url: "http://svc/v1/sessions",
      method: "POST",
      body: { dataset_id: "d" },
    });
  });

  it("posts observations with state and replace flag", async () => {
    const { seen, fetch } = capture(200, { observations: [] });
    await new ApiClient("", fetch).postObservation("sid", "S5", "absent", true);
    expect(seen[0]).toEqual({
      url: "/v1/sessions/sid/observations",
      method: "POST",
      body: { symptom: "S5", state: "absent", replace: true },
    });
  });

  it("deletes observations by symptom", async () => {
    const { seen, fetch } = capture(200, { observations: [] });
    await new ApiClient("", fetch).deleteObservation("sid", "S8");
    expect(seen[0]?.url).toBe("/v1/sessions/sid/observations/S8");
    expect(seen[0]?.method).toBe("DELETE");
  });

  it("fetches recommendations", async () => {
    const { seen, fetch } = capture(200, { candidates: [] });
    await new ApiClient("", fetch).getRecommendation("sid");
    expect(seen[0]?.url).toBe("/v1/sessions/sid/recommendation");
  });

  it("escapes path segments", async () => {
    const { seen, fetch } = capture(200, {});
    await new ApiClient("", fetch).deleteObservation("s/1", "S 5");
    expect(seen[0]?.url).toBe("/v1/sessions/s%2F1/observations/S%205");
  });
});

describe("ApiClient error handling", () => {
  it("rejects non-2xx with the structured service error", async () => {
    const body = { status: 409, code: "ContradictoryObservationError", detail: "nope" };
    const { fetch } = capture(409, body);
    const client = new ApiClient("", fetch);
    const err = await client.postObservation("s", "S5", "present").catch((e) => e);
    expect(err).toBeInstanceOf(ApiRequestError);
    expect(err.body).toEqual(body);
    expect(err.message).toBe("ContradictoryObservationError: nope");
  });
});
