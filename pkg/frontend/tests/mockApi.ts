/**
 * In-memory fake of the chat-service API for tests: a FetchLike that
 * implements the documented endpoints and records every request.
 */

import { FetchLike, Source } from "../src/api.js";

export interface RecordedCall {
  method: string;
  path: string;
  body: unknown;
  headers: Record<string, string>;
}

export interface MockBehavior {
  /** Per-question overrides; default answer attempts with one source. */
  abstainOn?: RegExp;
  sources?: Source[];
  ratingError?: { status: number; code: string; message: string };
}

const DEFAULT_SOURCES: Source[] = [
  { doc_id: "gold-00", title: "Guide to deadline", source_url: "https://u.example/gold-00" },
];

export function makeMockApi(behavior: MockBehavior = {}) {
  const calls: RecordedCall[] = [];
  let turnCounter = 0;

  const json = (status: number, body: unknown): Response =>
    new Response(JSON.stringify(body), {
      status,
      headers: { "Content-Type": "application/json" },
    });

  const fetchFn: FetchLike = async (url, init) => {
    const method = init?.method ?? "GET";
    const path = url.split("?")[0];
    const body = init?.body ? JSON.parse(String(init.body)) : null;
    calls.push({
      method,
      path,
      body,
      headers: (init?.headers as Record<string, string>) ?? {},
    });

    if (path === "/api/consent") {
      return json(200, { conversation_id: "conv-1", user_token: "tok-1" });
    }
    if (path === "/api/chat") {
      const message = (body as { message: string }).message;
      const abstain = behavior.abstainOn?.test(message) ?? false;
      turnCounter += 1;
      return json(200, {
        conversation_id: "conv-1",
        turn_id: `turn-${turnCounter}`,
        text: abstain
          ? "Unfortunately, I cannot answer based on the available documents."
          : `Answer to: ${message}`,
        attempted: !abstain,
        sources: abstain ? [] : behavior.sources ?? DEFAULT_SOURCES,
        route: "retrieval",
      });
    }
    if (/^\/api\/turns\/[^/]+\/rating$/.test(path)) {
      if (behavior.ratingError) {
        const { status, ...payload } = behavior.ratingError;
        return json(status, payload);
      }
      return json(200, { ok: true });
    }
    if (/^\/api\/conversations\/[^/]+\/rating$/.test(path)) {
      return json(200, { ok: true });
    }
    if (path === "/api/admin/stats") {
      return json(200, {
        period: { from: "a", to: "b" },
        users: 27,
        conversations: 40,
        messages: 358,
        thumbs_up: 5,
        thumbs_down: 2,
        avg_conversation_rating: 4.2,
      });
    }
    return json(404, { code: "NotFound", message: `no route for ${path}` });
  };

  return { fetchFn, calls };
}
