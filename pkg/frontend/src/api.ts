/**
 * Typed client for the chat-service JSON API (see docs/api.md in the
 * backend repository). Every UI action maps to exactly one of these
 * calls; no business logic lives here.
 */

export interface Source {
  doc_id: string;
  title: string;
  source_url: string;
}

export interface ChatResponse {
  conversation_id: string;
  turn_id: string;
  text: string;
  attempted: boolean;
  sources: Source[];
  route: "retrieval" | "direct";
}

export interface ConsentResponse {
  conversation_id: string;
  user_token: string;
}

export interface AdminStats {
  period: { from: string; to: string };
  users: number;
  conversations: number;
  messages: number;
  thumbs_up: number;
  thumbs_down: number;
  avg_conversation_rating: number | null;
}

export interface ConversationSummary {
  id: string;
  started_at: string;
  turn_count: number;
  thumbs_up: number;
  thumbs_down: number;
  conversation_rating: number | null;
}

export interface ConversationPage {
  items: ConversationSummary[];
  page: number;
  page_size: number;
  total: number;
}

export interface TurnDetail {
  id: string;
  role: "user" | "assistant";
  text: string;
  sources: Source[];
  attempted: boolean | null;
  rating: "up" | "down" | null;
  created_at: string;
}

export interface ConversationDetail {
  id: string;
  started_at: string;
  consent_at: string | null;
  conversation_rating: number | null;
  turns: TurnDetail[];
}

export interface ApiError {
  code: string;
  message: string;
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

/** Error carrying the server's {code, message} payload. */
export class ApiRequestError extends Error {
  constructor(public readonly code: string, message: string,
              public readonly status: number) {
    super(message);
  }
}

async function parse<T>(resp: Response): Promise<T> {
  const body = await resp.json();
  if (!resp.ok) {
    const err = body as ApiError;
    throw new ApiRequestError(err.code ?? "UnknownError",
                              err.message ?? resp.statusText, resp.status);
  }
  return body as T;
}

export class ApiClient {
  constructor(
    private readonly fetchFn: FetchLike,
    private readonly baseUrl: string = "",
  ) {}

  private post<T>(path: string, body: unknown,
                  headers: Record<string, string> = {}): Promise<T> {
    return this.fetchFn(this.baseUrl + path, {
      method: "POST",
      headers: { "Content-Type": "application/json", ...headers },
      body: JSON.stringify(body),
    }).then((r) => parse<T>(r));
  }

  private get<T>(path: string,
                 headers: Record<string, string> = {}): Promise<T> {
    return this.fetchFn(this.baseUrl + path, { headers }).then((r) =>
      parse<T>(r));
  }

  consent(userToken?: string): Promise<ConsentResponse> {
    return this.post("/api/consent", { user_token: userToken ?? null });
  }

  chat(message: string, conversationId: string | null,
       consent = false): Promise<ChatResponse> {
    return this.post("/api/chat", {
      message,
      conversation_id: conversationId,
      consent,
    });
  }

  rateTurn(conversationId: string, turnId: string,
           rating: "up" | "down"): Promise<void> {
    return this.post(`/api/turns/${turnId}/rating`, {
      conversation_id: conversationId,
      rating,
    });
  }

  rateConversation(conversationId: string, score: number): Promise<void> {
    return this.post(`/api/conversations/${conversationId}/rating`, { score });
  }

  private adminHeaders(token: string): Record<string, string> {
    return { Authorization: `Bearer ${token}` };
  }

  adminStats(token: string, from: string, to: string): Promise<AdminStats> {
    const query = new URLSearchParams({ from, to });
    return this.get(`/api/admin/stats?${query}`, this.adminHeaders(token));
  }

  adminConversations(token: string, page = 1,
                     pageSize = 20): Promise<ConversationPage> {
    const query = new URLSearchParams({
      page: String(page),
      page_size: String(pageSize),
    });
    return this.get(`/api/admin/conversations?${query}`,
                    this.adminHeaders(token));
  }

  adminConversation(token: string, id: string): Promise<ConversationDetail> {
    return this.get(`/api/admin/conversations/${id}`, this.adminHeaders(token));
  }
}
