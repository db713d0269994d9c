/** Browser wiring: binds the tested modules to the page. Everything shown is
 * a server response; this file only routes events and injects markup. */

import { ApiClient, ServiceError } from "./api.js";
import {
  moveVertex,
  rotatePart,
  scalePart,
  translatePart,
} from "./editor.js";
import { PRESETS, renderModelingPanel, renderViewControl } from "./panels.js";
import { SessionController } from "./state.js";
import type { ModelDoc } from "./types.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

const modelingPanel = el<HTMLDivElement>("modeling-panel");
const viewControl = el<HTMLDivElement>("view-control");
const banner = el<HTMLDivElement>("banner");
const toast = el<HTMLDivElement>("toast");
const partSelect = el<HTMLSelectElement>("part-select");
const viewReadout = el<HTMLSpanElement>("view-readout");

let api = new ApiClient(
  (el<HTMLInputElement>("base-url")).value || undefined,
);
let controller = makeController();
let toastTimer: ReturnType<typeof setTimeout> | undefined;

function makeController(): SessionController {
  return new SessionController(api, {
    onFrame: ({ frame }) => {
      modelingPanel.innerHTML = renderModelingPanel(
        frame,
        controller.selectedPart,
      );
      redrawControl();
    },
    onBanner: (message) => {
      banner.textContent = message ?? "";
      banner.style.display = message === null ? "none" : "block";
    },
    onNotice: showToast,
    onKeyViews: () => redrawControl(),
  });
}

function showToast(message: string): void {
  toast.textContent = message;
  toast.style.display = "block";
  clearTimeout(toastTimer);
  toastTimer = setTimeout(() => (toast.style.display = "none"), 4000);
}

function redrawControl(): void {
  viewControl.innerHTML = renderViewControl(
    controller.keyViews,
    controller.view,
  );
  const v = controller.view;
  viewReadout.textContent =
    `yaw ${v.yaw.toFixed(1)}  pitch ${v.pitch.toFixed(1)}  ` +
    `roll ${v.roll.toFixed(1)}`;
  for (const dot of viewControl.querySelectorAll<SVGCircleElement>(".dot")) {
    dot.addEventListener("click", () => {
      void controller.clickDot(Number(dot.dataset.index));
    });
  }
}

// --- model loading ----------------------------------------------------------

el<HTMLButtonElement>("load-model").addEventListener("click", () => {
  let doc: ModelDoc;
  try {
    doc = JSON.parse(el<HTMLTextAreaElement>("model-json").value) as ModelDoc;
  } catch (err) {
    showToast(`model JSON did not parse: ${String(err)}`);
    return;
  }
  api = new ApiClient(el<HTMLInputElement>("base-url").value || undefined);
  controller = makeController();
  void controller
    .load(doc)
    .then(() => {
      partSelect.innerHTML = doc.parts
        .map((p) => `<option>${p.part_id}</option>`)
        .join("");
      controller.selectedPart = doc.parts[0]?.part_id ?? null;
      redrawControl();
      return controller.calc();
    })
    .catch((err) => showToast(String(err)));
});

partSelect.addEventListener("change", () => {
  controller.selectedPart = partSelect.value;
  if (controller.lastFrame !== null) {
    modelingPanel.innerHTML = renderModelingPanel(
      controller.lastFrame,
      controller.selectedPart,
    );
  }
});

// --- view control -----------------------------------------------------------

let dragging = false;
let last: [number, number] = [0, 0];
viewControl.addEventListener("pointerdown", (ev) => {
  dragging = true;
  last = [ev.clientX, ev.clientY];
  viewControl.setPointerCapture(ev.pointerId);
});
viewControl.addEventListener("pointermove", (ev) => {
  if (!dragging) {
    return;
  }
  const [dx, dy] = [ev.clientX - last[0], ev.clientY - last[1]];
  last = [ev.clientX, ev.clientY];
  void controller.drag(dx, dy, ev.shiftKey);
  redrawControl();
});
viewControl.addEventListener("pointerup", () => (dragging = false));

for (const [name, view] of Object.entries(PRESETS)) {
  el<HTMLButtonElement>(`preset-${name}`).addEventListener("click", () => {
    void controller.setView(view);
    redrawControl();
  });
}

el<HTMLInputElement>("quantize").addEventListener("change", (ev) => {
  controller.quantize = (ev.target as HTMLInputElement).checked ? 10 : 0;
  void controller.requestFrame();
});

// --- toolbar ------------------------------------------------------------------

el<HTMLButtonElement>("btn-add").addEventListener("click", () => {
  void controller.addKeyFromFrame().then((ok) => {
    if (ok) {
      showToast("key view added at the current rotation");
    }
  });
});
el<HTMLButtonElement>("btn-delete").addEventListener("click", () => {
  void controller.deleteLatestKey();
});
el<HTMLButtonElement>("btn-calc").addEventListener("click", () => {
  void controller.calc().catch((err) => showToast(String(err)));
});

// --- part editor ----------------------------------------------------------------

/** Edit the selected part's record at the nearest key view and PUT it back;
 * the service validates (flips rejected) and the frame is re-requested. */
async function editSelected(
  mutate: (record: import("./types.js").PartViewDoc) =>
    import("./types.js").PartViewDoc,
): Promise<void> {
  const partId = controller.selectedPart;
  const sessionId = controller.sessionId;
  if (partId === null || sessionId === null) {
    return;
  }
  const model = await api.getModel(sessionId);
  const index = nearestKeyView(model);
  if (index === null) {
    showToast("no key views to edit");
    return;
  }
  const record = model.key_views[index].parts[partId];
  try {
    await api.editPart(sessionId, partId, index, mutate(record));
  } catch (err) {
    if (err instanceof ServiceError) {
      showToast(`edit rejected: ${err.message}`);
      return;
    }
    throw err;
  }
  await controller.calc();
}

function nearestKeyView(model: ModelDoc): number | null {
  let best: number | null = null;
  let bestDist = Infinity;
  model.key_views.forEach((kv, i) => {
    const d =
      Math.abs(kv.view.yaw - controller.view.yaw) +
      Math.abs(kv.view.pitch - controller.view.pitch) +
      Math.abs(kv.view.roll - controller.view.roll);
    if (d < bestDist) {
      [best, bestDist] = [i, d];
    }
  });
  return best;
}

const step = () => Number(el<HTMLInputElement>("edit-step").value) || 0.1;
el<HTMLButtonElement>("edit-left").addEventListener("click", () => {
  void editSelected((r) => translatePart(r, -step(), 0));
});
el<HTMLButtonElement>("edit-right").addEventListener("click", () => {
  void editSelected((r) => translatePart(r, step(), 0));
});
el<HTMLButtonElement>("edit-up").addEventListener("click", () => {
  void editSelected((r) => translatePart(r, 0, step()));
});
el<HTMLButtonElement>("edit-down").addEventListener("click", () => {
  void editSelected((r) => translatePart(r, 0, -step()));
});
el<HTMLButtonElement>("edit-rot-ccw").addEventListener("click", () => {
  void editSelected((r) => rotatePart(r, 10));
});
el<HTMLButtonElement>("edit-rot-cw").addEventListener("click", () => {
  void editSelected((r) => rotatePart(r, -10));
});
el<HTMLButtonElement>("edit-grow").addEventListener("click", () => {
  void editSelected((r) => scalePart(r, 1.1));
});
el<HTMLButtonElement>("edit-shrink").addEventListener("click", () => {
  void editSelected((r) => scalePart(r, 1 / 1.1));
});
el<HTMLButtonElement>("edit-vertex").addEventListener("click", () => {
  const index = Number(el<HTMLInputElement>("vertex-index").value);
  const x = Number(el<HTMLInputElement>("vertex-x").value);
  const y = Number(el<HTMLInputElement>("vertex-y").value);
  void editSelected((r) => moveVertex(r, index, x, y));
});

redrawControl();
