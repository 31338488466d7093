// Browser bootstrap: canvas painter, pickers, pan/zoom/click wiring.
// Everything testable lives in app/render/panel/state; this file is glue.

import { ApiClient } from "./api.js";
import { ExplorerApp, Panel } from "./app.js";
import { NEUTRAL } from "./palette.js";
import { sparklinePoints } from "./panel.js";
import { CellPainter } from "./render.js";
import { ViewportState } from "./state.js";

const BASE_URL =
  new URLSearchParams(window.location.search).get("api") ?? "http://127.0.0.1:8000";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing #${id}`);
  }
  return node as T;
}

class CanvasPainter implements CellPainter {
  constructor(
    private readonly ctx: CanvasRenderingContext2D,
    private readonly legendBox: HTMLElement,
    private readonly bannerBox: HTMLElement
  ) {}

  clear(): void {
    this.bannerBox.hidden = true;
    this.ctx.fillStyle = "#111114";
    this.ctx.fillRect(0, 0, this.ctx.canvas.width, this.ctx.canvas.height);
  }

  cell(x: number, y: number, size: number, fill: string): void {
    this.ctx.fillStyle = fill;
    this.ctx.fillRect(x - size / 2 + 0.5, y - size / 2 + 0.5, size - 1, size - 1);
  }

  outline(x: number, y: number, size: number, stroke: string): void {
    this.ctx.strokeStyle = stroke;
    this.ctx.lineWidth = 2;
    this.ctx.strokeRect(x - size / 2, y - size / 2, size, size);
  }

  legend(swatches: { color: string; upTo: number }[]): void {
    this.legendBox.replaceChildren();
    for (const { color, upTo } of swatches) {
      const item = document.createElement("span");
      item.className = "swatch";
      item.style.background = color;
      item.title = `<= ${upTo}`;
      this.legendBox.appendChild(item);
    }
    const neutral = document.createElement("span");
    neutral.className = "swatch";
    neutral.style.background = NEUTRAL;
    neutral.title = "no data";
    this.legendBox.appendChild(neutral);
  }

  banner(message: string): void {
    this.bannerBox.hidden = false;
    this.bannerBox.textContent = message;
  }
}

function renderPanel(box: HTMLElement, panel: Panel): void {
  box.replaceChildren();
  if (panel === null) {
    box.innerHTML = "<p class='hint'>click a parcel</p>";
    return;
  }
  if (panel.kind === "unknown") {
    box.innerHTML = `<p class='error'>${panel.message}</p>`;
    return;
  }
  const usd = (v: number | null) => (v === null ? "–" : `$${v}`);
  const rows: [string, string][] = [
    ["last price", usd(panel.lastPriceUsd)],
    [
      "listing",
      panel.listingPriceUsd === null
        ? "not listed"
        : `${usd(panel.listingPriceUsd)} on ${panel.listingExchange}`,
    ],
    ["fair value", usd(panel.fairValueUsd)],
    ["value ratio", panel.valueRatio === null ? "–" : panel.valueRatio.toFixed(3)],
    ["flips", String(panel.flipCount)],
  ];
  const title = document.createElement("h3");
  title.textContent = panel.title;
  box.appendChild(title);
  if (panel.belowFairValue) {
    const badge = document.createElement("p");
    badge.className = "badge";
    badge.textContent = "listed below fair value";
    box.appendChild(badge);
  }
  const list = document.createElement("dl");
  for (const [label, value] of rows) {
    const dt = document.createElement("dt");
    dt.textContent = label;
    const dd = document.createElement("dd");
    dd.textContent = value;
    list.append(dt, dd);
  }
  box.appendChild(list);
  const points = sparklinePoints(panel.trafficSparkline);
  if (points) {
    box.insertAdjacentHTML(
      "beforeend",
      `<p class="spark-label">traffic, 30d</p>
       <svg width="120" height="28" viewBox="0 0 120 28">
         <polyline fill="none" stroke="#7fd1b9" stroke-width="1.5" points="${points}"/>
       </svg>`
    );
  }
}

async function boot(): Promise<void> {
  const canvas = el<HTMLCanvasElement>("map");
  const ctx = canvas.getContext("2d");
  if (!ctx) {
    throw new Error("canvas 2d unavailable");
  }
  const painter = new CanvasPainter(ctx, el("legend"), el("banner"));
  const camera = { width: canvas.width, height: canvas.height };
  const api = new ApiClient(BASE_URL);

  const catalog = await api.platforms();
  const first = catalog.platforms[0];
  if (!first) {
    throw new Error("service reports no platforms");
  }
  const state = new ViewportState(first.platform, first.views[0] ?? "land");
  const app = new ExplorerApp(api, painter, camera, state);
  app.onPanelChange = (panel) => renderPanel(el("panel"), panel);

  const platformPick = el<HTMLSelectElement>("platform");
  const viewPick = el<HTMLSelectElement>("view");
  for (const info of catalog.platforms) {
    platformPick.add(new Option(info.platform, info.platform));
  }
  const syncViews = () => {
    const info = catalog.platforms.find((p) => p.platform === state.platform);
    viewPick.replaceChildren();
    for (const v of info?.views ?? []) {
      viewPick.add(new Option(v, v));
    }
    viewPick.value = state.viewId;
  };
  syncViews();

  platformPick.onchange = async () => {
    const info = catalog.platforms.find((p) => p.platform === platformPick.value);
    await app.showPlatform(platformPick.value, info?.views[0]);
    syncViews();
  };
  viewPick.onchange = () => void app.showView(viewPick.value);

  let dragging = false;
  let lastX = 0;
  let lastY = 0;
  canvas.onmousedown = (e) => {
    dragging = true;
    lastX = e.offsetX;
    lastY = e.offsetY;
  };
  canvas.onmousemove = (e) => {
    if (!dragging) {
      return;
    }
    state.panBy(e.offsetX - lastX, e.offsetY - lastY);
    lastX = e.offsetX;
    lastY = e.offsetY;
    app.redraw();
  };
  canvas.onmouseup = (e) => {
    const moved = Math.abs(e.offsetX - lastX) + Math.abs(e.offsetY - lastY);
    dragging = false;
    if (moved < 3) {
      void app.clickAt(e.offsetX, e.offsetY);
    }
  };
  canvas.onmouseleave = () => {
    dragging = false;
  };
  canvas.onwheel = (e) => {
    e.preventDefault();
    state.zoomBy(e.deltaY < 0 ? 1.15 : 1 / 1.15);
    app.redraw();
  };

  renderPanel(el("panel"), null);
  await app.refreshLayer();
}

void boot();
