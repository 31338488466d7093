// Grid rendering. The painter abstraction keeps drawing testable: the real
// canvas painter lives in main.ts, tests record the command stream instead.

import { colorForIndex, SCALE, SELECTION } from "./palette.js";
import { ViewportState } from "./state.js";
import { ViewLayer } from "./types.js";

export const BASE_CELL_PX = 14;

export interface CellPainter {
  clear(): void;
  cell(x: number, y: number, size: number, fill: string): void;
  outline(x: number, y: number, size: number, stroke: string): void;
  legend(swatches: { color: string; upTo: number }[]): void;
  banner(message: string): void;
}

export interface Camera {
  width: number;
  height: number;
}

export function cellSize(state: ViewportState): number {
  return BASE_CELL_PX * state.zoom;
}

export function toScreen(
  state: ViewportState,
  camera: Camera,
  x: number,
  y: number
): { sx: number; sy: number } {
  const size = cellSize(state);
  return {
    sx: camera.width / 2 + x * size + state.panX,
    sy: camera.height / 2 - y * size + state.panY,
  };
}

export function pickCell(
  state: ViewportState,
  camera: Camera,
  screenX: number,
  screenY: number
): { x: number; y: number } {
  const size = cellSize(state);
  return {
    x: Math.floor((screenX - camera.width / 2 - state.panX) / size + 0.5) + 0,
    y: Math.round(-(screenY - camera.height / 2 - state.panY) / size) + 0,  // +0 folds -0
  };
}

/** Draw one layer under the viewport. Refuses mismatched layers outright:
 * an error banner, no partial grid. */
export function renderMap(
  layer: ViewLayer,
  state: ViewportState,
  camera: Camera,
  painter: CellPainter
): number {
  if (layer.platform !== state.platform) {
    painter.banner(`layer is for ${layer.platform}, viewport shows ${state.platform}`);
    return 0;
  }
  painter.clear();
  const size = cellSize(state);
  let drawn = 0;
  for (const entry of layer.entries) {
    const { sx, sy } = toScreen(state, camera, entry.x, entry.y);
    painter.cell(sx, sy, size, colorForIndex(entry.color));
    drawn += 1;
    if (entry.token_id === state.selectedTokenId) {
      painter.outline(sx, sy, size, SELECTION);
    }
  }
  painter.legend(layer.legend.map((upTo, i) => ({ color: SCALE[i] as string, upTo })));
  return drawn;
}
