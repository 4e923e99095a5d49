/**
 * Pure view functions: state in, HTML string out. No fetch calls, no DOM
 * access, so every rendering rule is testable in a plain Node process.
 */

import { AdminStats, ConversationDetail, ConversationPage } from "./api.js";
import { ChatSession, UiTurn } from "./state.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderConsentModal(): string {
  return `
<div class="modal-backdrop">
  <div class="modal" role="dialog" aria-modal="true">
    <h2>Before we start</h2>
    <p>This chat stores your messages to improve answers about admission
    and enrollment. Please confirm to continue.</p>
    <button data-action="accept-consent">I agree</button>
  </div>
</div>`.trim();
}

function renderSources(turn: UiTurn): string {
  // never render a sources block for abstaining or sourceless turns
  if (!turn.attempted || turn.sources.length === 0) {
    return "";
  }
  const items = turn.sources
    .map(
      (s) =>
        `<li><a href="${escapeHtml(s.source_url)}" target="_blank"` +
        ` rel="noopener">${escapeHtml(s.title)}</a></li>`,
    )
    .join("");
  return `<ul class="sources">${items}</ul>`;
}

function renderThumbs(turn: UiTurn): string {
  if (turn.role !== "assistant" || turn.id === null) {
    return "";
  }
  const mark = (value: "up" | "down") =>
    turn.rating === value ? ' class="selected"' : "";
  return (
    `<span class="thumbs" data-turn-id="${escapeHtml(turn.id)}">` +
    `<button data-action="rate-up"${mark("up")}>👍</button>` +
    `<button data-action="rate-down"${mark("down")}>👎</button></span>`
  );
}

export function renderTurn(turn: UiTurn): string {
  return `
<div class="turn turn-${turn.role}">
  <div class="bubble">${escapeHtml(turn.text)}</div>
  ${renderSources(turn)}
  ${renderThumbs(turn)}
</div>`.trim();
}

export function renderLikertPrompt(): string {
  const buttons = [1, 2, 3, 4, 5]
    .map((n) => `<button data-action="likert" data-score="${n}">${n}</button>`)
    .join("");
  return `
<div class="likert-prompt">
  <p>How is this conversation going so far?</p>
  ${buttons}
</div>`.trim();
}

export function renderChat(session: ChatSession): string {
  const parts: string[] = [];
  if (!session.consented) {
    parts.push(renderConsentModal());
  }
  parts.push('<div class="transcript">');
  for (const turn of session.turns) {
    parts.push(renderTurn(turn));
  }
  parts.push("</div>");
  if (session.showLikertPrompt) {
    parts.push(renderLikertPrompt());
  }
  const disabled = session.inputEnabled ? "" : " disabled";
  parts.push(
    `<form class="composer"><input name="message" type="text"${disabled}` +
    ` placeholder="Ask about admission…">` +
    `<button type="submit"${disabled}>Send</button></form>`,
  );
  return parts.join("\n");
}

export function renderStatsCards(stats: AdminStats): string {
  const rating =
    stats.avg_conversation_rating === null
      ? "–"
      : stats.avg_conversation_rating.toFixed(2);
  const card = (label: string, value: string | number) =>
    `<div class="card"><span class="value">${value}</span>` +
    `<span class="label">${label}</span></div>`;
  return `
<div class="stat-cards">
  ${card("Users", stats.users)}
  ${card("Conversations", stats.conversations)}
  ${card("Messages", stats.messages)}
  ${card("👍", stats.thumbs_up)}
  ${card("👎", stats.thumbs_down)}
  ${card("Avg. rating", rating)}
</div>`.trim();
}

export function renderConversationList(page: ConversationPage): string {
  const rows = page.items
    .map(
      (c) =>
        `<tr data-conv-id="${escapeHtml(c.id)}"><td>${escapeHtml(
          c.started_at,
        )}</td><td>${c.turn_count}</td><td>${c.thumbs_up}/${c.thumbs_down}` +
        `</td><td>${c.conversation_rating ?? "–"}</td></tr>`,
    )
    .join("");
  const lastPage = Math.max(1, Math.ceil(page.total / page.page_size));
  return `
<table class="conversations">
  <thead><tr><th>Started</th><th>Turns</th><th>👍/👎</th><th>Rating</th></tr></thead>
  <tbody>${rows}</tbody>
</table>
<nav class="pager">
  <button data-action="prev-page"${page.page <= 1 ? " disabled" : ""}>‹</button>
  <span>${page.page} / ${lastPage}</span>
  <button data-action="next-page"${page.page >= lastPage ? " disabled" : ""}>›</button>
</nav>`.trim();
}

export function renderConversationDetail(detail: ConversationDetail): string {
  const turns = detail.turns
    .map((t) => {
      const sources =
        t.attempted && t.sources.length > 0
          ? `<ul class="sources">${t.sources
              .map((s) => `<li>${escapeHtml(s.title)}</li>`)
              .join("")}</ul>`
          : "";
      const rating = t.rating ? ` <em>(${t.rating})</em>` : "";
      return `<div class="turn turn-${t.role}">${escapeHtml(t.text)}` +
        `${rating}${sources}</div>`;
    })
    .join("\n");
  return `
<div class="conversation-detail">
  <h3>Conversation ${escapeHtml(detail.id)}</h3>
  <p>Started ${escapeHtml(detail.started_at)} · rating ${
    detail.conversation_rating ?? "–"
  }</p>
  ${turns}
</div>`.trim();
}

export function renderAdminLogin(): string {
  return `
<form class="admin-login">
  <label>Admin token <input name="token" type="password"></label>
  <button type="submit">Sign in</button>
</form>`.trim();
}
