// Explorer controller: holds viewport state, caches fetched layers, and
// routes selections to the detail panel. Layers carry parcel coordinates,
// so switching views never refetches parcels; switching back to an
// already-seen view renders straight from cache.

import { ApiClient, CancelledError, NotFoundError } from "./api.js";
import { buildPanel, PanelModel, UnknownPanel, unknownPanel } from "./panel.js";
import { Camera, CellPainter, pickCell, renderMap } from "./render.js";
import { ViewportState } from "./state.js";
import { ViewLayer } from "./types.js";

export type Panel = PanelModel | UnknownPanel | null;

export class ExplorerApp {
  readonly state: ViewportState;
  private readonly api: ApiClient;
  private readonly painter: CellPainter;
  private readonly camera: Camera;
  private readonly layerCache = new Map<string, ViewLayer>();
  private currentLayer: ViewLayer | null = null;
  panel: Panel = null;
  onPanelChange: (panel: Panel) => void = () => {};

  constructor(api: ApiClient, painter: CellPainter, camera: Camera, state: ViewportState) {
    this.api = api;
    this.painter = painter;
    this.camera = camera;
    this.state = state;
  }

  private cacheKey(): string {
    return `${this.state.platform}/${this.state.viewId}`;
  }

  async showView(viewId: string): Promise<void> {
    this.state.setView(viewId);
    await this.refreshLayer();
  }

  async showPlatform(platform: string, viewId?: string): Promise<void> {
    this.state.setPlatform(platform);
    if (viewId) {
      this.state.setView(viewId);
    }
    this.setPanel(null);
    await this.refreshLayer();
  }

  async refreshLayer(): Promise<void> {
    const key = this.cacheKey();
    let layer = this.layerCache.get(key);
    if (!layer) {
      try {
        layer = await this.api.viewLayer(this.state.platform, this.state.viewId);
      } catch (err) {
        if (err instanceof CancelledError) {
          return; // a newer view request took over
        }
        this.painter.banner(String(err));
        return;
      }
      this.layerCache.set(key, layer);
    }
    this.currentLayer = layer;
    this.redraw();
  }

  redraw(): number {
    if (!this.currentLayer) {
      return 0;
    }
    return renderMap(this.currentLayer, this.state, this.camera, this.painter);
  }

  async clickAt(screenX: number, screenY: number): Promise<void> {
    if (!this.currentLayer) {
      return;
    }
    const { x, y } = pickCell(this.state, this.camera, screenX, screenY);
    const entry = this.currentLayer.entries.find((e) => e.x === x && e.y === y);
    if (!entry) {
      this.state.select(null);
      this.setPanel(null);
      this.redraw();
      return;
    }
    await this.selectParcel(entry.token_id);
  }

  async selectParcel(tokenId: number): Promise<void> {
    this.state.select(tokenId);
    this.redraw();
    try {
      const detail = await this.api.parcelDetail(this.state.platform, tokenId);
      this.setPanel(buildPanel(detail));
    } catch (err) {
      if (err instanceof CancelledError) {
        return;
      }
      if (err instanceof NotFoundError) {
        this.setPanel(unknownPanel(tokenId));
        return;
      }
      throw err;
    }
  }

  private setPanel(panel: Panel): void {
    this.panel = panel;
    this.onPanelChange(panel);
  }
}
