// Console view state and its pure update helpers. Every number shown in the
// rules table arrives pre-formatted from the server and is stored verbatim;
// the checked flags are overwritten by server responses after each round trip.

import type { ChatBubble, LogSummary, RuleRecord, RuleRow } from "./types";

export interface ViewState {
  log: LogSummary | null;
  uploadError: string | null;
  sessionId: string | null;
  providers: Record<string, string[]>;
  provider: string;
  model: string;
  apiKey: string; // memory only, sent once at session creation
  chat: ChatBubble[];
  pending: boolean;
  rules: RuleRow[];
  sup: number;
  modelDot: string | null;
  modelVersion: number;
  warnings: string[];
}

export function initialState(): ViewState {
  return {
    log: null,
    uploadError: null,
    sessionId: null,
    providers: {},
    provider: "",
    model: "",
    apiKey: "",
    chat: [],
    pending: false,
    rules: [],
    sup: 0.2,
    modelDot: null,
    modelVersion: 0,
    warnings: [],
  };
}

export function applyLog(state: ViewState, summary: LogSummary): void {
  state.log = summary;
  state.uploadError = null;
}

export function applyUploadError(state: ViewState, message: string): void {
  state.uploadError = message;
}

export function setSup(state: ViewState, sup: number): void {
  state.sup = Math.min(1, Math.max(0, sup));
}

export function appendBubble(state: ViewState, bubble: ChatBubble): void {
  state.chat = [...state.chat, bubble];
}

export function applyRules(state: ViewState, rows: RuleRow[]): void {
  state.rules = rows.map((row) => ({ ...row }));
}

export function toggleRule(state: ViewState, index: number): void {
  const row = state.rules[index];
  if (row) row.selected = !row.selected;
}

export function checkedIndices(state: ViewState): number[] {
  return state.rules.flatMap((row, i) => (row.selected ? [i] : []));
}

function sameRule(record: RuleRecord, row: RuleRow): boolean {
  return (
    record.template === row.template &&
    record.activities.length === row.activities.length &&
    record.activities.every((a, i) => a === row.activities[i])
  );
}

export function mirrorSelection(state: ViewState, selected: RuleRecord[]): void {
  for (const row of state.rules) {
    row.selected = selected.some((record) => sameRule(record, row));
  }
}

export function applyDiscovery(state: ViewState, dot: string, warnings: string[]): void {
  state.modelDot = dot;
  state.modelVersion += 1;
  state.warnings = warnings;
}

export function absorbWarnings(state: ViewState, warnings: string[]): void {
  if (warnings.length) state.warnings = [...state.warnings, ...warnings];
}

export function canInitialize(state: ViewState): boolean {
  if (!state.log || !state.provider) return false;
  if (state.provider === "scripted") return true;
  return state.model !== "" && state.apiKey.trim() !== "";
}
