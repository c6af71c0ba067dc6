import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";

interface Call {
  url: string;
  init?: RequestInit;
}

function fakeFetch(status: number, body: unknown) {
  const calls: Call[] = [];
  const impl = async (url: string, init?: RequestInit): Promise<Response> => {
    calls.push({ url, init });
    if (status === 204) {
      return new Response(null, { status });
    }
    return new Response(JSON.stringify(body), {
      status,
      headers: { "Content-Type": "application/json" },
    });
  };
  return { calls, impl };
}

describe("ApiClient", () => {
  it("GETs the layout and returns the body untouched", async () => {
    const body = { mode: "largest", countries: { french: [0.5, -0.25] } };
    const { calls, impl } = fakeFetch(200, body);
    const client = new ApiClient("http://host:1", impl);
    const layout = await client.layout();
    expect(calls[0]?.url).toBe("http://host:1/layout");
    expect(calls[0]?.init?.method).toBe("GET");
    expect(layout).toEqual(body);
  });

  it("strips a trailing slash from the base url", async () => {
    const { calls, impl } = fakeFetch(200, { mode: "largest", countries: {} });
    await new ApiClient("http://host:1/", impl).layout();
    expect(calls[0]?.url).toBe("http://host:1/layout");
  });

  it("POSTs session creation as JSON", async () => {
    const { calls, impl } = fakeFetch(201, { session_id: "s1", state: {} });
    const client = new ApiClient("", impl);
    await client.createSession(["soy sauce", "mirin"], "french");
    const init = calls[0]?.init;
    expect(calls[0]?.url).toBe("/sessions");
    expect(init?.method).toBe("POST");
    expect(init?.headers).toEqual({ "Content-Type": "application/json" });
    expect(JSON.parse(String(init?.body))).toEqual({
      ingredients: ["soy sauce", "mirin"],
      target: "french",
    });
  });

  it("routes suggest and apply to the session subpaths", async () => {
    const { calls, impl } = fakeFetch(200, {});
    const client = new ApiClient("", impl);
    await client.suggest("s7", "mirin");
    await client.apply("s7", "mirin", "calvados");
    expect(calls[0]?.url).toBe("/sessions/s7/suggest");
    expect(JSON.parse(String(calls[0]?.init?.body))).toEqual({ ingredient: "mirin" });
    expect(calls[1]?.url).toBe("/sessions/s7/apply");
    expect(JSON.parse(String(calls[1]?.init?.body))).toEqual({
      replaced: "mirin",
      replacement: "calvados",
    });
  });

  it("url-encodes session ids", async () => {
    const { calls, impl } = fakeFetch(200, {});
    await new ApiClient("", impl).getSession("a/b c");
    expect(calls[0]?.url).toBe("/sessions/a%2Fb%20c");
  });

  it("resolves a 204 delete with no body", async () => {
    const { impl } = fakeFetch(204, null);
    await expect(new ApiClient("", impl).deleteSession("s1")).resolves.toBeUndefined();
  });

  it("turns an error body's detail into an ApiError", async () => {
    const { impl } = fakeFetch(409, { detail: "illegal swap: not in recipe" });
    const err = await new ApiClient("", impl)
      .apply("s1", "x", "y")
      .catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).status).toBe(409);
    expect((err as ApiError).message).toBe("illegal swap: not in recipe");
  });

  it("keeps a generic detail when the error body is not JSON", async () => {
    const impl = async () => new Response("<html>boom</html>", { status: 502 });
    const err = await new ApiClient("", impl).layout().catch((e: unknown) => e);
    expect((err as ApiError).status).toBe(502);
    expect((err as ApiError).message).toBe("unexpected status 502");
  });

  it("maps a network failure to status 0", async () => {
    const impl = async () => {
      throw new TypeError("fetch failed");
    };
    const err = await new ApiClient("", impl).layout().catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).status).toBe(0);
  });
});
