/**
 * Browser glue: wires the state machine and view functions to the DOM.
 * Kept as thin as possible; all rendering rules live in render.ts and all
 * flow rules in state.ts so they stay unit-testable.
 */

import { ApiClient, ApiRequestError } from "./api.js";
import {
  renderAdminLogin,
  renderChat,
  renderConversationDetail,
  renderConversationList,
  renderStatsCards,
} from "./render.js";
import { ChatSession } from "./state.js";

const api = new ApiClient((url, init) => fetch(url, init));

function mountChat(root: HTMLElement): void {
  const session = new ChatSession(api);

  const redraw = () => {
    root.innerHTML = renderChat(session);
    if (session.showLikertPrompt) {
      session.markLikertPromptShown();
    }
  };

  root.addEventListener("click", async (event) => {
    const target = event.target as HTMLElement;
    const action = target.dataset.action;
    if (!action) return;
    try {
      if (action === "accept-consent") {
        await session.acceptConsent();
      } else if (action === "rate-up" || action === "rate-down") {
        const turnId = target.closest<HTMLElement>("[data-turn-id]")?.dataset
          .turnId;
        if (turnId) {
          await session.rateTurn(turnId, action === "rate-up" ? "up" : "down");
        }
      } else if (action === "likert") {
        await session.submitLikert(Number(target.dataset.score));
      }
    } catch (err) {
      session.lastError =
        err instanceof ApiRequestError ? err.message : String(err);
    }
    redraw();
  });

  root.addEventListener("submit", async (event) => {
    event.preventDefault();
    const input = root.querySelector<HTMLInputElement>("input[name=message]");
    const message = input?.value.trim();
    if (!message || !session.inputEnabled) return;
    try {
      await session.send(message);
    } catch (err) {
      session.lastError =
        err instanceof ApiRequestError ? err.message : String(err);
    }
    redraw();
  });

  redraw();
}

function mountAdmin(root: HTMLElement): void {
  let token = sessionStorage.getItem("admitbot-admin-token") ?? "";
  let page = 1;

  const draw = async () => {
    if (!token) {
      root.innerHTML = renderAdminLogin();
      return;
    }
    const now = new Date();
    const monthStart = new Date(now.getFullYear(), now.getMonth(), 1);
    try {
      const [stats, conversations] = await Promise.all([
        api.adminStats(token, monthStart.toISOString(), now.toISOString()),
        api.adminConversations(token, page),
      ]);
      root.innerHTML =
        renderStatsCards(stats) + renderConversationList(conversations);
    } catch (err) {
      if (err instanceof ApiRequestError && err.status === 401) {
        token = "";
        sessionStorage.removeItem("admitbot-admin-token");
        root.innerHTML = renderAdminLogin();
        return;
      }
      throw err;
    }
  };

  root.addEventListener("submit", (event) => {
    event.preventDefault();
    const input = root.querySelector<HTMLInputElement>("input[name=token]");
    if (input?.value) {
      token = input.value;
      sessionStorage.setItem("admitbot-admin-token", token);
      void draw();
    }
  });

  root.addEventListener("click", async (event) => {
    const target = event.target as HTMLElement;
    if (target.dataset.action === "prev-page" && page > 1) {
      page -= 1;
      void draw();
    } else if (target.dataset.action === "next-page") {
      page += 1;
      void draw();
    } else {
      const convId = target.closest<HTMLElement>("[data-conv-id]")?.dataset
        .convId;
      if (convId && token) {
        const detail = await api.adminConversation(token, convId);
        root.insertAdjacentHTML("beforeend", renderConversationDetail(detail));
      }
    }
  });

  void draw();
}

const chatRoot = document.getElementById("chat");
if (chatRoot) mountChat(chatRoot);
const adminRoot = document.getElementById("admin");
if (adminRoot) mountAdmin(adminRoot);
