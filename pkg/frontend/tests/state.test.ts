import { describe, expect, it } from "vitest";

import { ApiClient, ApiRequestError } from "../src/api.js";
import { ChatSession } from "../src/state.js";
import { makeMockApi } from "./mockApi.js";

function makeSession(behavior = {}) {
  const mock = makeMockApi(behavior);
  const session = new ChatSession(new ApiClient(mock.fetchFn));
  return { session, calls: mock.calls };
}

describe("consent gate", () => {
  it("blocks input until consent is accepted", async () => {
    const { session } = makeSession();
    expect(session.inputEnabled).toBe(false);
    await expect(session.send("hello")).rejects.toThrow("input is disabled");
    await session.acceptConsent();
    expect(session.inputEnabled).toBe(true);
  });

  it("acceptConsent hits POST /api/consent", async () => {
    const { session, calls } = makeSession();
    await session.acceptConsent();
    expect(calls).toEqual([
      expect.objectContaining({ method: "POST", path: "/api/consent" }),
    ]);
    expect(session.conversationId).toBe("conv-1");
  });
});

describe("chat flow", () => {
  it("appends user and assistant turns per exchange", async () => {
    const { session } = makeSession();
    await session.acceptConsent();
    await session.send("When is the deadline?");
    expect(session.turns.map((t) => t.role)).toEqual(["user", "assistant"]);
    expect(session.turns[1].sources[0].doc_id).toBe("gold-00");
  });

  it("uses POST /api/chat with the conversation id", async () => {
    const { session, calls } = makeSession();
    await session.acceptConsent();
    await session.send("q1");
    const chat = calls.find((c) => c.path === "/api/chat");
    expect(chat?.body).toMatchObject({ message: "q1", conversation_id: "conv-1" });
  });

  it("keeps abstaining turns sourceless", async () => {
    const { session } = makeSession({ abstainOn: /weather/ });
    await session.acceptConsent();
    await session.send("What is the weather?");
    const turn = session.turns[1];
    expect(turn.attempted).toBe(false);
    expect(turn.sources).toEqual([]);
  });
});

describe("thumbs ratings", () => {
  it("calls the documented rating endpoint", async () => {
    const { session, calls } = makeSession();
    await session.acceptConsent();
    await session.send("q");
    const turnId = session.turns[1].id!;
    await session.rateTurn(turnId, "up");
    const rating = calls.find((c) => c.path === `/api/turns/${turnId}/rating`);
    expect(rating?.method).toBe("POST");
    expect(rating?.body).toEqual({ conversation_id: "conv-1", rating: "up" });
    expect(session.turns[1].rating).toBe("up");
  });

  it("rolls back the optimistic rating on server error", async () => {
    const { session } = makeSession({
      ratingError: { status: 422, code: "OutOfRange", message: "bad" },
    });
    await session.acceptConsent();
    await session.send("q");
    const turnId = session.turns[1].id!;
    await expect(session.rateTurn(turnId, "down")).rejects.toBeInstanceOf(
      ApiRequestError,
    );
    expect(session.turns[1].rating).toBeNull();
  });
});

describe("conversation rating prompt", () => {
  async function exchange(session: ChatSession, n: number) {
    for (let i = 0; i < n; i += 1) {
      await session.send(`question ${i}`);
    }
  }

  it("does not fire before the third assistant turn", async () => {
    const { session } = makeSession();
    await session.acceptConsent();
    await exchange(session, 2);
    expect(session.showLikertPrompt).toBe(false);
  });

  it("fires exactly once after the third assistant turn", async () => {
    const { session } = makeSession();
    await session.acceptConsent();
    await exchange(session, 3);
    expect(session.showLikertPrompt).toBe(true);
    session.markLikertPromptShown();
    expect(session.showLikertPrompt).toBe(false);
    await exchange(session, 2); // more turns must not re-trigger it
    expect(session.showLikertPrompt).toBe(false);
  });

  it("submits the score to the conversation rating endpoint", async () => {
    const { session, calls } = makeSession();
    await session.acceptConsent();
    await exchange(session, 3);
    await session.submitLikert(4);
    const rating = calls.find(
      (c) => c.path === "/api/conversations/conv-1/rating",
    );
    expect(rating?.body).toEqual({ score: 4 });
    expect(session.likertSubmitted).toBe(true);
    expect(session.showLikertPrompt).toBe(false);
  });
});
