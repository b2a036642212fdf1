// Payload shapes of the discovery service API.

export interface LogSummary {
  log_id: string;
  alphabet: string[];
  traces: number;
  events: number;
  parse_warnings?: number;
}

export interface RuleRow {
  template: string;
  activities: string[];
  activated: number;
  satisfied: number;
  support: string; // pre-formatted by the server; rendered verbatim
  confidence: string;
  selected: boolean;
}

export interface RuleRecord {
  template: string;
  activities: string[];
}

export interface MessageResponse {
  outcome: "clarification" | "rules" | "failure";
  text?: string;
  rules?: RuleRow[];
  error_cycles?: number;
  transcript?: string[];
  warnings: string[];
}

export interface RulesResponse {
  rules: RuleRow[];
  warnings: string[];
}

export interface SelectionResponse {
  selected: RuleRecord[];
  warnings: string[];
}

export interface DiscoverResponse {
  model_id: string;
  text: string;
  json: unknown;
  dot: string;
  warnings: string[];
}

export interface ModelResponse {
  model_id: string;
  format: string;
  model: string;
  warnings: string[];
}

export interface ProvidersResponse {
  providers: Record<string, string[]>;
}

export interface ClientSpec {
  provider: string;
  model?: string;
  api_key?: string;
  responses?: string[];
}

export type ChatRole = "domain-expert" | "assistant" | "service";

export interface ChatBubble {
  role: ChatRole;
  text: string;
  awaitingReply?: boolean; // assistant asked a question, expert owes an answer
  transcript?: string[]; // expandable failure details
}
