// Pure HTML renderers for the three console areas. They read the view state
// and return markup; event wiring happens in main.ts via data attributes.

import { renderDotSvg } from "./dot";
import { canInitialize, ViewState } from "./state";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderLeftPanel(state: ViewState): string {
  const parts: string[] = ['<section class="panel left-panel">'];

  parts.push('<h2>Event Log &amp; Discovery</h2>');
  parts.push(
    '<div class="upload">' +
      '<input type="file" id="log-file" accept=".csv,.xes"/>' +
      '<button id="upload-btn">Upload log</button>' +
      "</div>",
  );
  if (state.uploadError) {
    parts.push(`<div class="upload-error">${escapeHtml(state.uploadError)}</div>`);
  }
  if (state.log) {
    parts.push(
      `<div class="log-summary">${state.log.traces} traces, ` +
        `${state.log.events} events, ${state.log.alphabet.length} activities</div>`,
    );
  }

  parts.push(
    '<label class="sup-control">sup ' +
      `<input type="range" id="sup-slider" min="0" max="1" step="0.05" value="${state.sup}"/>` +
      `<span id="sup-value">${state.sup.toFixed(2)}</span>` +
      "</label>",
  );

  if (state.rules.length) {
    const rows = state.rules
      .map((row, i) => {
        const checked = row.selected ? " checked" : "";
        return (
          "<tr>" +
          `<td><input type="checkbox" class="rule-check" data-index="${i}"${checked}/></td>` +
          `<td>${escapeHtml(row.template)}</td>` +
          `<td>${row.activities.map(escapeHtml).join(", ")}</td>` +
          `<td class="num">${escapeHtml(row.support)}</td>` +
          `<td class="num">${escapeHtml(row.confidence)}</td>` +
          "</tr>"
        );
      })
      .join("");
    parts.push(
      '<table class="rules-table">' +
        "<thead><tr><th></th><th>template</th><th>activities</th>" +
        "<th>support</th><th>confidence</th></tr></thead>" +
        `<tbody>${rows}</tbody></table>`,
    );
  } else {
    parts.push('<div class="rules-empty">No rules extracted yet.</div>');
  }

  const disabled = state.log ? "" : " disabled";
  parts.push(`<button id="discover-btn"${disabled}>Run Discovery</button>`);
  parts.push("</section>");
  return parts.join("\n");
}

export function renderChat(state: ViewState): string {
  const parts: string[] = ['<section class="panel right-panel">'];
  parts.push("<h2>LLM Assistant</h2>");

  const providerOptions = Object.keys(state.providers)
    .map(
      (p) =>
        `<option value="${escapeHtml(p)}"${p === state.provider ? " selected" : ""}>` +
        `${escapeHtml(p)}</option>`,
    )
    .join("");
  const modelOptions = (state.providers[state.provider] ?? [])
    .map(
      (m) =>
        `<option value="${escapeHtml(m)}"${m === state.model ? " selected" : ""}>` +
        `${escapeHtml(m)}</option>`,
    )
    .join("");
  const initDisabled = canInitialize(state) ? "" : " disabled";
  parts.push(
    '<div class="llm-form">' +
      `<select id="provider-select"><option value="">provider…</option>${providerOptions}</select>` +
      `<select id="model-select"><option value="">model…</option>${modelOptions}</select>` +
      `<input type="password" id="api-key" placeholder="API key" value="${escapeHtml(state.apiKey)}"/>` +
      `<button id="init-btn"${initDisabled}>Initialize LLM</button>` +
      "</div>",
  );

  parts.push('<div class="chat-transcript">');
  for (const bubble of state.chat) {
    const role = bubble.role;
    const cls = role === "domain-expert" ? "expert" : role;
    const awaiting =
      bubble.awaitingReply === true
        ? '<div class="awaiting-reply">awaiting your reply…</div>'
        : "";
    const transcript = bubble.transcript
      ? "<details><summary>error transcript</summary><ul>" +
        bubble.transcript.map((t) => `<li>${escapeHtml(t)}</li>`).join("") +
        "</ul></details>"
      : "";
    parts.push(
      `<div class="bubble ${cls}" data-role="${role}">` +
        `<div class="text">${escapeHtml(bubble.text)}</div>${awaiting}${transcript}</div>`,
    );
  }
  if (state.pending) {
    parts.push('<div class="bubble pending">response pending…</div>');
  }
  parts.push("</div>");

  const sendDisabled = state.sessionId && !state.pending ? "" : " disabled";
  parts.push(
    '<div class="chat-input">' +
      '<textarea id="chat-text" placeholder="Describe the process…"></textarea>' +
      `<button id="send-btn"${sendDisabled}>Send</button>` +
      "</div>",
  );
  parts.push("</section>");
  return parts.join("\n");
}

export function renderModel(state: ViewState): string {
  const parts: string[] = ['<section class="panel bottom-panel">'];
  parts.push("<h2>Process Model</h2>");
  if (state.warnings.length) {
    parts.push(
      '<div class="warnings-banner">' +
        state.warnings.map((w) => `<div>${escapeHtml(w)}</div>`).join("") +
        "</div>",
    );
  }
  if (state.modelDot) {
    parts.push(`<span class="version-badge">v${state.modelVersion}</span>`);
    parts.push(renderDotSvg(state.modelDot));
  } else {
    parts.push('<div class="model-empty">Run discovery to see a model.</div>');
  }
  parts.push("</section>");
  return parts.join("\n");
}
