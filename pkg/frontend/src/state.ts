/**
 * Chat session state machine. Holds the conversation transcript and the
 * two purely presentational rules the UI owns: input is blocked until
 * consent is acknowledged, and the conversation-rating (Likert) prompt is
 * offered exactly once, after the third assistant turn. Everything else
 * (routing, abstention, rating validity) comes from server payloads.
 */

import { ApiClient, ChatResponse, Source } from "./api.js";

export interface UiTurn {
  id: string | null; // null for user turns (only assistant turns are ratable)
  role: "user" | "assistant";
  text: string;
  attempted: boolean;
  sources: Source[];
  rating: "up" | "down" | null;
}

export const LIKERT_AFTER_ASSISTANT_TURNS = 3;

export class ChatSession {
  consented = false;
  conversationId: string | null = null;
  turns: UiTurn[] = [];
  pending = false;
  likertPromptShown = false;
  likertSubmitted = false;
  lastError: string | null = null;

  constructor(private readonly api: ApiClient) {}

  get inputEnabled(): boolean {
    return this.consented && !this.pending;
  }

  get assistantTurnCount(): number {
    return this.turns.filter((t) => t.role === "assistant").length;
  }

  /** The Likert prompt shows once, after the third assistant turn. */
  get showLikertPrompt(): boolean {
    return (
      this.consented &&
      !this.likertPromptShown &&
      !this.likertSubmitted &&
      this.assistantTurnCount >= LIKERT_AFTER_ASSISTANT_TURNS
    );
  }

  async acceptConsent(): Promise<void> {
    const resp = await this.api.consent();
    this.conversationId = resp.conversation_id;
    this.consented = true;
  }

  async send(message: string): Promise<ChatResponse> {
    if (!this.inputEnabled) {
      throw new Error("input is disabled");
    }
    this.pending = true;
    this.turns.push({
      id: null, role: "user", text: message, attempted: true,
      sources: [], rating: null,
    });
    try {
      const resp = await this.api.chat(message, this.conversationId);
      this.conversationId = resp.conversation_id;
      this.turns.push({
        id: resp.turn_id,
        role: "assistant",
        text: resp.text,
        attempted: resp.attempted,
        sources: resp.sources,
        rating: null,
      });
      this.lastError = null;
      return resp;
    } finally {
      this.pending = false;
    }
  }

  /** Optimistic thumbs rating, rolled back if the server rejects it. */
  async rateTurn(turnId: string, rating: "up" | "down"): Promise<void> {
    const turn = this.turns.find((t) => t.id === turnId);
    if (!turn || !this.conversationId) {
      throw new Error(`unknown turn ${turnId}`);
    }
    const previous = turn.rating;
    turn.rating = rating;
    try {
      await this.api.rateTurn(this.conversationId, turnId, rating);
    } catch (err) {
      turn.rating = previous;
      throw err;
    }
  }

  markLikertPromptShown(): void {
    this.likertPromptShown = true;
  }

  async submitLikert(score: number): Promise<void> {
    if (!this.conversationId) {
      throw new Error("no conversation");
    }
    await this.api.rateConversation(this.conversationId, score);
    this.likertSubmitted = true;
    this.likertPromptShown = true;
  }
}
