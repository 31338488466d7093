import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { ExplorerApp } from "../src/app.js";
import { ViewportState } from "../src/state.js";
import { ParcelDetail, ViewLayer } from "../src/types.js";
import { FakeFetch, fixture, fixtureText, RecordingPainter } from "./helpers.js";

const CAMERA = { width: 800, height: 600 };

function makeApp() {
  const fake = new FakeFetch();
  fake.route("/v1/decentraland/views/land", fixtureText("layer_decentraland_land.json"));
  fake.route("/v1/decentraland/views/flip", fixtureText("layer_decentraland_flip.json"));
  fake.route("/v1/decentraland/views/fair_value", fixtureText("layer_decentraland_fair_value.json"));
  const below = fixture<ParcelDetail>("detail_below_fair.json");
  fake.route(`/v1/decentraland/parcels/${below.parcel.token_id}`, fixtureText("detail_below_fair.json"));
  const painter = new RecordingPainter();
  const api = new ApiClient("http://test", fake.fn);
  const app = new ExplorerApp(api, painter, CAMERA, new ViewportState("decentraland", "land"));
  return { app, fake, painter, below };
}

describe("ExplorerApp", () => {
  it("renders all parcels of the platform", async () => {
    const { app, painter } = makeApp();
    await app.refreshLayer();
    const layer = fixture<ViewLayer>("layer_decentraland_land.json");
    expect(painter.cells()).toHaveLength(layer.entries.length);
  });

  it("switching views recolors without any parcel fetch", async () => {
    const { app, fake, painter } = makeApp();
    await app.refreshLayer();
    painter.reset();
    await app.showView("flip");
    expect(painter.cells().length).toBeGreaterThan(0);
    // only the two layer endpoints were hit; nothing else
    expect(fake.calls).toEqual([
      "/v1/decentraland/views/land",
      "/v1/decentraland/views/flip",
    ]);
    expect(fake.countFor("/v1/decentraland/parcels")).toBe(0);
  });

  it("switching away and back redraws identically from cache", async () => {
    const { app, fake, painter } = makeApp();
    await app.refreshLayer();
    const first = JSON.stringify(painter.commands);
    await app.showView("flip");
    painter.reset();
    await app.showView("land");
    expect(JSON.stringify(painter.commands)).toBe(first);
    expect(fake.countFor("/v1/decentraland/views/land")).toBe(1); // cached, not refetched
  });

  it("clicking a parcel loads its panel from the detail endpoint", async () => {
    const { app, below } = makeApp();
    await app.refreshLayer();
    await app.selectParcel(below.parcel.token_id);
    expect(app.panel).not.toBeNull();
    expect(app.panel!.kind).toBe("parcel");
    if (app.panel!.kind === "parcel") {
      expect(app.panel!.tokenId).toBe(below.parcel.token_id);
      expect(app.panel!.belowFairValue).toBe(true);
    }
  });

  it("404 detail shows the unknown-parcel panel", async () => {
    const { app } = makeApp();
    await app.refreshLayer();
    await app.selectParcel(999999);
    expect(app.panel!.kind).toBe("unknown");
  });

  it("platform switch clears the selection and panel", async () => {
    const { app, fake, below } = makeApp();
    fake.route("/v1/voxels/views/land", fixtureText("layer_decentraland_land.json"));
    await app.refreshLayer();
    await app.selectParcel(below.parcel.token_id);
    expect(app.state.selectedTokenId).toBe(below.parcel.token_id);
    await app.showPlatform("voxels", "land");
    expect(app.state.selectedTokenId).toBeNull();
    expect(app.panel).toBeNull();
  });

  it("a newer view request wins over a stalled older one", async () => {
    const { app, fake, painter } = makeApp();
    fake.hold("/v1/decentraland/views/land");
    const stalled = app.refreshLayer();
    await app.showView("flip"); // aborts the land fetch
    fake.release("/v1/decentraland/views/land");
    await stalled;
    const legendAfter = painter.commands.filter((c) => c.op === "legend").length;
    expect(app.state.viewId).toBe("flip");
    const flip = fixture<ViewLayer>("layer_decentraland_flip.json");
    expect(painter.cells().slice(-flip.entries.length)).toHaveLength(flip.entries.length);
    expect(legendAfter).toBe(1); // only the flip layer ever rendered
  });

  it("clicking empty space clears the selection", async () => {
    const { app, below } = makeApp();
    await app.refreshLayer();
    await app.selectParcel(below.parcel.token_id);
    await app.clickAt(CAMERA.width - 1, 0); // far corner, outside the grid
    expect(app.state.selectedTokenId).toBeNull();
    expect(app.panel).toBeNull();
  });
});
