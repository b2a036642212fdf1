// Browser bootstrap: owns the controller, re-renders panels after every
// action, and wires DOM events through data attributes.

import { ApiClient } from "./api";
import { ConsoleController } from "./controller";
import { renderChat, renderLeftPanel, renderModel } from "./render";
import { setSup } from "./state";

const api = new ApiClient("");
const controller = new ConsoleController(api);

function panel(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing container #${id}`);
  return el;
}

function redraw(): void {
  panel("left").innerHTML = renderLeftPanel(controller.state);
  panel("chat").innerHTML = renderChat(controller.state);
  panel("model").innerHTML = renderModel(controller.state);
  wire();
}

function wire(): void {
  const uploadBtn = document.getElementById("upload-btn");
  uploadBtn?.addEventListener("click", async () => {
    const input = document.getElementById("log-file") as HTMLInputElement | null;
    const file = input?.files?.[0];
    if (!file) return;
    const format = file.name.toLowerCase().endsWith(".xes") ? "xes" : "csv";
    await controller.uploadLog(format, await file.text());
    redraw();
  });

  const slider = document.getElementById("sup-slider") as HTMLInputElement | null;
  slider?.addEventListener("input", () => {
    setSup(controller.state, Number(slider.value));
    const label = document.getElementById("sup-value");
    if (label) label.textContent = controller.state.sup.toFixed(2);
  });

  for (const box of document.querySelectorAll<HTMLInputElement>(".rule-check")) {
    box.addEventListener("change", async () => {
      await controller.toggleSelection(Number(box.dataset.index));
      redraw();
    });
  }

  document.getElementById("discover-btn")?.addEventListener("click", async () => {
    await controller.runDiscovery();
    redraw();
  });

  const providerSelect = document.getElementById("provider-select") as HTMLSelectElement | null;
  providerSelect?.addEventListener("change", () => {
    controller.state.provider = providerSelect.value;
    controller.state.model = "";
    redraw();
  });
  const modelSelect = document.getElementById("model-select") as HTMLSelectElement | null;
  modelSelect?.addEventListener("change", () => {
    controller.state.model = modelSelect.value;
    redraw();
  });
  const keyInput = document.getElementById("api-key") as HTMLInputElement | null;
  keyInput?.addEventListener("input", () => {
    controller.state.apiKey = keyInput.value;
    const initBtn = document.getElementById("init-btn") as HTMLButtonElement | null;
    if (initBtn) {
      initBtn.disabled = !(
        controller.state.log &&
        controller.state.provider &&
        (controller.state.provider === "scripted" ||
          (controller.state.model && controller.state.apiKey.trim()))
      );
    }
  });

  document.getElementById("init-btn")?.addEventListener("click", async () => {
    await controller.initializeSession({
      provider: controller.state.provider,
      model: controller.state.model || undefined,
      api_key: controller.state.apiKey || undefined,
    });
    redraw();
  });

  document.getElementById("send-btn")?.addEventListener("click", async () => {
    const box = document.getElementById("chat-text") as HTMLTextAreaElement | null;
    const text = box?.value.trim();
    if (!text) return;
    if (box) box.value = "";
    redraw(); // show the pending state immediately
    await controller.sendMessage(text);
    redraw();
  });
}

controller
  .loadProviders()
  .catch((error) => console.error("provider load failed", error))
  .finally(redraw);
