import { describe, expect, it } from "vitest";

import { NEUTRAL, SCALE } from "../src/palette.js";
import { pickCell, renderMap, toScreen } from "../src/render.js";
import { ViewportState } from "../src/state.js";
import { ViewLayer } from "../src/types.js";
import { fixture, RecordingPainter } from "./helpers.js";

const CAMERA = { width: 800, height: 600 };

function layerOf(entries: ViewLayer["entries"], platform = "voxels"): ViewLayer {
  return {
    platform,
    view_id: "land",
    generated_at: "2021-01-30",
    legend: [1, 2, 3, 4, 5, 6, 7, 8, 9, 10],
    entries,
  };
}

describe("renderMap", () => {
  it("draws one cell per entry", () => {
    const layer = layerOf([
      { token_id: 1, x: 0, y: 0, metric: 1, color: 0 },
      { token_id: 2, x: 1, y: 0, metric: 2, color: 3 },
      { token_id: 3, x: 0, y: 1, metric: 5, color: 5 },
      { token_id: 4, x: -1, y: -1, metric: 9, color: 9 },
    ]);
    const painter = new RecordingPainter();
    const state = new ViewportState("voxels", "land");
    const drawn = renderMap(layer, state, CAMERA, painter);
    expect(drawn).toBe(4);
    expect(painter.cells()).toHaveLength(4);
  });

  it("uses legend colors for metrics and neutral for nulls", () => {
    const layer = layerOf([
      { token_id: 1, x: 0, y: 0, metric: 1, color: 2 },
      { token_id: 2, x: 1, y: 0, metric: null, color: null },
    ]);
    const painter = new RecordingPainter();
    renderMap(layer, new ViewportState("voxels", "land"), CAMERA, painter);
    const [a, b] = painter.cells() as { fill: string }[];
    expect(a!.fill).toBe(SCALE[2]);
    expect(b!.fill).toBe(NEUTRAL);
  });

  it("shows ten legend swatches", () => {
    const painter = new RecordingPainter();
    renderMap(layerOf([]), new ViewportState("voxels", "land"), CAMERA, painter);
    const legend = painter.commands.find((c) => c.op === "legend") as {
      swatches: unknown[];
    };
    expect(legend.swatches).toHaveLength(10);
  });

  it("refuses a mismatched layer without drawing anything", () => {
    const layer = layerOf([{ token_id: 1, x: 0, y: 0, metric: 1, color: 1 }], "somnium");
    const painter = new RecordingPainter();
    const drawn = renderMap(layer, new ViewportState("voxels", "land"), CAMERA, painter);
    expect(drawn).toBe(0);
    expect(painter.cells()).toHaveLength(0);
    expect(painter.banners()[0]).toMatch(/somnium/);
  });

  it("re-rendering identical inputs reproduces the same commands", () => {
    const layer = fixture<ViewLayer>("layer_decentraland_land.json");
    const state = new ViewportState("decentraland", "land");
    const first = new RecordingPainter();
    const second = new RecordingPainter();
    renderMap(layer, state, CAMERA, first);
    renderMap(layer, state, CAMERA, second);
    expect(JSON.stringify(second.commands)).toBe(JSON.stringify(first.commands));
  });

  it("renders every parcel of a real layer fixture", () => {
    const layer = fixture<ViewLayer>("layer_decentraland_land.json");
    const painter = new RecordingPainter();
    const drawn = renderMap(layer, new ViewportState("decentraland", "land"), CAMERA, painter);
    expect(drawn).toBe(layer.entries.length);
    expect(layer.entries.length).toBeGreaterThan(0);
  });

  it("outlines the selected parcel", () => {
    const layer = layerOf([{ token_id: 9, x: 2, y: 2, metric: 1, color: 1 }]);
    const state = new ViewportState("voxels", "land");
    state.select(9);
    const painter = new RecordingPainter();
    renderMap(layer, state, CAMERA, painter);
    expect(painter.commands.some((c) => c.op === "outline")).toBe(true);
  });
});

describe("coordinate transforms", () => {
  it("pickCell inverts toScreen at any pan/zoom", () => {
    const state = new ViewportState("voxels", "land");
    state.panBy(37, -22);
    state.zoomBy(1.7);
    for (const [x, y] of [
      [0, 0],
      [3, -2],
      [-5, 4],
      [12, 12],
    ] as const) {
      const { sx, sy } = toScreen(state, CAMERA, x, y);
      expect(pickCell(state, CAMERA, sx, sy)).toEqual({ x, y });
    }
  });
});
