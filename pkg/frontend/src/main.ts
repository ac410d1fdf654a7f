/**
 * Application wiring: embedded web view on the left, 3D structure view on
 * the right, engine client underneath. DOM mutations in the inspected
 * frame push snapshots (continuous mode) or wait for the refresh button
 * (manual mode).
 */
import * as THREE from "three";
import { ServiceClient } from "./client.js";
import { EmbeddedView } from "./controls.js";
import { measureDocument } from "./measure.js";
import type { FilterDoc, NodePath } from "./protocol.js";
import { CityRenderer } from "./renderer.js";
import { dispatchClickAt, ViewerState, wheelIncrement } from "./state.js";

const $ = <T extends HTMLElement>(id: string): T =>
  document.getElementById(id) as T;

const client = new ServiceClient(
  (window as any).DOMCITY_SERVICE ?? "http://127.0.0.1:8020",
);
const state = new ViewerState();

const frame = $<HTMLIFrameElement>("inspected-frame");
const view = new EmbeddedView({
  defaultUrl: (window as any).DOMCITY_DEFAULT_URL ?? "about:blank",
  frame,
  urlInput: $("url-input"),
  defaultButton: $("default-url-button"),
  toggleButton: $("toggle-visualization"),
  banner: $("origin-banner"),
  visualizationPanel: $("visualization-panel"),
});

const counter = $("element-counter");
const tooltip = $("hover-tooltip");
const popover = $("box-popover");
let manualMode = false;
let snapshotInFlight = false;
let snapshotQueued = false;

const renderer = new CityRenderer($("city-canvas") as HTMLCanvasElement, {
  onHover(_path, matchText) {
    tooltip.style.display = matchText ? "block" : "none";
    tooltip.textContent = matchText ?? "";
  },
  onClick(path) {
    const filter = state.clickBox(path);
    client.send(filter);
    showPopover(path);
    renderer.update(state.scene, state.selected);
  },
  onDoubleClick(path) {
    const doc = frame.contentDocument;
    if (!doc) return;
    if (!dispatchClickAt(doc, path)) {
      showPopover(path, "element no longer exists in the live page");
    }
  },
});

function showPopover(path: NodePath, warning: string | null = null): void {
  const content = state.popoverFor(path, warning);
  popover.style.display = "block";
  $("popover-text").textContent = content.text;
  $("popover-warning").textContent = content.warning ?? "";
  const expand = $("popover-expand");
  expand.style.display = content.truncated ? "inline" : "none";
  expand.onclick = () => {
    const box = state.scene.boxes.find(
      (b) => b.path.join("/") === path.join("/"),
    );
    if (box) $("popover-text").textContent = box.match_text;
    expand.style.display = "none";
  };
  $("popover-close").onclick = () => (popover.style.display = "none");
}

state.onSceneChange = (scene) => {
  counter.textContent = state.counterText();
  if (scene.screenshot_ref) {
    new THREE.TextureLoader().load(
      client.screenshotUrl(scene.screenshot_ref),
      (texture) => {
        renderer.setScreenshot(texture);
        renderer.update(scene, state.selected);
      },
    );
  }
  renderer.update(scene, state.selected);
};

async function pushSnapshot(): Promise<void> {
  // at most one push in flight; the latest wins
  if (!view.measurable() || !frame.contentDocument || !frame.contentWindow) {
    return;
  }
  if (snapshotInFlight) {
    snapshotQueued = true;
    return;
  }
  snapshotInFlight = true;
  try {
    const snap = await measureDocument(
      frame.contentDocument,
      frame.contentWindow,
    );
    client.send(snap);
  } finally {
    snapshotInFlight = false;
    if (snapshotQueued) {
      snapshotQueued = false;
      void pushSnapshot();
    }
  }
}

let observer: MutationObserver | null = null;
frame.addEventListener("load", () => {
  observer?.disconnect();
  if (!view.measurable() || !frame.contentDocument) return;
  void pushSnapshot();
  observer = new MutationObserver(() => {
    if (!manualMode) void pushSnapshot();
  });
  observer.observe(frame.contentDocument, {
    subtree: true,
    childList: true,
    attributes: true,
    characterData: true,
  });
});

// filter and style inputs, each also driven by the horizontal scroll wheel
function bindNumeric(
  input: HTMLInputElement,
  step: number,
  apply: (value: number) => void,
): void {
  input.addEventListener("change", () => apply(Number(input.value)));
  input.addEventListener("wheel", (e) => {
    if (e.deltaX === 0) return;
    e.preventDefault();
    const detents = Math.sign(e.deltaX);
    const next = wheelIncrement(Number(input.value) || 0, detents, step);
    input.value = String(next);
    apply(next);
  });
}

function sendFilter(partial: FilterDoc): void {
  client.send({ type: "filter", ...partial });
}

bindNumeric($("layer-min"), 1, (v) => sendFilter({ depth_min: v }));
bindNumeric($("layer-max"), 1, (v) => sendFilter({ depth_max: v }));
bindNumeric($("layer-gap"), 0.25, () => {
  // layer gap is presentation-side; restratify by rescaling y locally
  void client.fetchScene().then((scene) => state.acceptScene(scene));
});

$("search-input").addEventListener("change", (e) =>
  sendFilter({ search: (e.target as HTMLInputElement).value }),
);
$("crop-toggle").addEventListener("change", (e) =>
  sendFilter({ cropping: (e.target as HTMLInputElement).checked }),
);
$("clear-isolation").addEventListener("click", () => {
  state.selected = null;
  sendFilter({ subtree_root: null });
});
$("manual-toggle").addEventListener("change", (e) => {
  manualMode = (e.target as HTMLInputElement).checked;
});
$("refresh-button").addEventListener("click", () =>
  client.send({ type: "refresh" }),
);

client.connect((diff) => {
  if (!state.acceptDiff(diff)) {
    // out-of-order frame: resync from the full scene
    void client.fetchScene().then((scene) => state.acceptScene(scene));
  }
});
void client.fetchScene().then((scene) => state.acceptScene(scene));

window.addEventListener("resize", () => {
  const canvas = $("city-canvas");
  renderer.resize(canvas.clientWidth, canvas.clientHeight);
});
