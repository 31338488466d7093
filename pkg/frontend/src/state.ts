// Viewport state: which platform/view is shown, pan/zoom, and the selected
// parcel. Switching platform clears the selection (a token id only means
// something within its platform).

export const MIN_ZOOM = 0.25;
export const MAX_ZOOM = 8;

export class ViewportState {
  platform: string;
  viewId: string;
  panX = 0;
  panY = 0;
  zoom = 1;
  selectedTokenId: number | null = null;

  constructor(platform: string, viewId: string) {
    this.platform = platform;
    this.viewId = viewId;
  }

  setPlatform(platform: string): void {
    if (platform !== this.platform) {
      this.platform = platform;
      this.selectedTokenId = null;
    }
  }

  setView(viewId: string): void {
    this.viewId = viewId;
  }

  panBy(dx: number, dy: number): void {
    this.panX += dx;
    this.panY += dy;
  }

  zoomBy(factor: number): void {
    this.zoom = Math.min(MAX_ZOOM, Math.max(MIN_ZOOM, this.zoom * factor));
  }

  select(tokenId: number | null): void {
    this.selectedTokenId = tokenId;
  }
}
