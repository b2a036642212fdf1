// Orchestrates API calls against the view state. One in-flight chat request
// per session is enforced here (the send button is disabled while pending).

import { ApiClient, ApiError } from "./api";
import {
  absorbWarnings,
  appendBubble,
  applyDiscovery,
  applyLog,
  applyRules,
  applyUploadError,
  checkedIndices,
  initialState,
  mirrorSelection,
  toggleRule,
  ViewState,
} from "./state";
import type { ClientSpec } from "./types";

export class ConsoleController {
  readonly state: ViewState = initialState();

  constructor(private readonly api: ApiClient) {}

  async loadProviders(): Promise<void> {
    const response = await this.api.getProviders();
    this.state.providers = response.providers;
  }

  async uploadLog(format: "csv" | "xes", content: string): Promise<void> {
    try {
      applyLog(this.state, await this.api.uploadLog(format, content));
    } catch (error) {
      applyUploadError(this.state, error instanceof Error ? error.message : String(error));
      return;
    }
    // discovery must work before (or without) any LLM interaction, so every
    // uploaded log gets a baseline session with an inert client
    await this.initializeSession({ provider: "scripted", responses: [] });
  }

  async initializeSession(spec: ClientSpec): Promise<void> {
    if (!this.state.log) throw new Error("upload a log first");
    const { session_id } = await this.api.createSession(this.state.log.log_id, spec);
    this.state.sessionId = session_id;
    this.state.chat = [];
    this.state.rules = [];
  }

  async sendMessage(text: string): Promise<void> {
    const sessionId = this.state.sessionId;
    if (!sessionId || this.state.pending) return;
    appendBubble(this.state, { role: "domain-expert", text });
    this.state.pending = true;
    try {
      const response = await this.api.postMessage(sessionId, text);
      absorbWarnings(this.state, response.warnings);
      if (response.outcome === "clarification") {
        appendBubble(this.state, {
          role: "assistant",
          text: response.text ?? "",
          awaitingReply: true,
        });
      } else if (response.outcome === "rules") {
        applyRules(this.state, response.rules ?? []);
        appendBubble(this.state, {
          role: "service",
          text:
            `${response.rules?.length ?? 0} rule(s) extracted` +
            (response.error_cycles ? ` after ${response.error_cycles} correction(s)` : "") +
            "; review and select them in the rules table.",
        });
      } else {
        appendBubble(this.state, {
          role: "service",
          text: `extraction failed after ${response.error_cycles} attempts`,
          transcript: response.transcript,
        });
      }
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        appendBubble(this.state, { role: "service", text: "response pending, retry shortly" });
      } else {
        appendBubble(this.state, {
          role: "service",
          text: error instanceof Error ? error.message : String(error),
        });
      }
    } finally {
      this.state.pending = false;
    }
  }

  /** Toggle locally, push the full selection, mirror the server's echo. */
  async toggleSelection(index: number): Promise<void> {
    const sessionId = this.state.sessionId;
    if (!sessionId) return;
    toggleRule(this.state, index);
    const response = await this.api.putSelection(sessionId, checkedIndices(this.state));
    absorbWarnings(this.state, response.warnings);
    mirrorSelection(this.state, response.selected);
  }

  async refreshRules(): Promise<void> {
    const sessionId = this.state.sessionId;
    if (!sessionId) return;
    const response = await this.api.getRules(sessionId);
    absorbWarnings(this.state, response.warnings);
    applyRules(this.state, response.rules);
  }

  /** Push the current selection, then run discovery with the current sup. */
  async runDiscovery(): Promise<void> {
    const sessionId = this.state.sessionId;
    if (!sessionId) return;
    await this.api.putSelection(sessionId, checkedIndices(this.state));
    const response = await this.api.runDiscovery(sessionId, this.state.sup);
    applyDiscovery(this.state, response.dot, response.warnings);
  }
}
