// Typed client for the discovery service; the UI talks to nothing else.

import type {
  ClientSpec,
  DiscoverResponse,
  LogSummary,
  MessageResponse,
  ModelResponse,
  ProvidersResponse,
  RuleRecord,
  RulesResponse,
  SelectionResponse,
} from "./types";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    detail: string,
  ) {
    super(detail);
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly base: string = "",
    private readonly fetchFn: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: {} };
    if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(this.base + path, init);
    const payload = await response.json().catch(() => ({}));
    if (!response.ok) {
      const detail =
        typeof payload === "object" && payload !== null && "detail" in payload
          ? String((payload as { detail: unknown }).detail)
          : response.statusText;
      throw new ApiError(response.status, detail);
    }
    return payload as T;
  }

  uploadLog(format: "csv" | "xes", content: string): Promise<LogSummary> {
    return this.request("POST", "/logs", { format, content });
  }

  getProviders(): Promise<ProvidersResponse> {
    return this.request("GET", "/providers");
  }

  createSession(logId: string, client: ClientSpec): Promise<{ session_id: string }> {
    return this.request("POST", "/sessions", { log_id: logId, client });
  }

  postMessage(sessionId: string, text: string): Promise<MessageResponse> {
    return this.request("POST", `/sessions/${sessionId}/messages`, { text });
  }

  getRules(sessionId: string): Promise<RulesResponse> {
    return this.request("GET", `/sessions/${sessionId}/rules`);
  }

  putSelection(sessionId: string, indices: number[]): Promise<SelectionResponse> {
    return this.request("PUT", `/sessions/${sessionId}/selection`, { indices });
  }

  putSelectionLiterals(
    sessionId: string,
    constraints: RuleRecord[],
  ): Promise<SelectionResponse> {
    return this.request("PUT", `/sessions/${sessionId}/selection`, { constraints });
  }

  runDiscovery(sessionId: string, sup: number): Promise<DiscoverResponse> {
    return this.request("POST", `/sessions/${sessionId}/discover`, { sup });
  }

  getModel(sessionId: string, format: "text" | "json" | "dot"): Promise<ModelResponse> {
    return this.request("GET", `/sessions/${sessionId}/model?format=${format}`);
  }
}
