// Parcel detail panel model. Every number is the API's own value; the only
// arithmetic the client performs anywhere is the displayed price/fair-value
// ratio and the below-fair-value comparison that drives the badge.

import { ParcelDetail } from "./types.js";

export interface PanelModel {
  kind: "parcel";
  title: string;
  tokenId: number;
  lastPriceUsd: number | null;
  listingPriceUsd: number | null;
  listingExchange: string | null;
  fairValueUsd: number | null;
  valueRatio: number | null;
  flipCount: number;
  belowFairValue: boolean;
  trafficSparkline: number[];
}

export interface UnknownPanel {
  kind: "unknown";
  message: string;
}

export function buildPanel(detail: ParcelDetail): PanelModel {
  const lastPrice = detail.last_trade ? detail.last_trade.amount_usd : null;
  const listing = detail.current_listing ? detail.current_listing.price_usd : null;
  const fair = detail.fair_value_usd;
  return {
    kind: "parcel",
    title: `${detail.parcel.platform} parcel #${detail.parcel.token_id} (${detail.parcel.x}, ${detail.parcel.y})`,
    tokenId: detail.parcel.token_id,
    lastPriceUsd: lastPrice,
    listingPriceUsd: listing,
    listingExchange: detail.current_listing ? detail.current_listing.exchange : null,
    fairValueUsd: fair,
    valueRatio: lastPrice !== null && fair !== null && fair !== 0 ? lastPrice / fair : null,
    flipCount: detail.flip_count,
    belowFairValue: listing !== null && fair !== null && listing < fair,
    trafficSparkline: detail.traffic_30d.map((p) => p.count),
  };
}

export function unknownPanel(tokenId: number): UnknownPanel {
  return { kind: "unknown", message: `unknown parcel ${tokenId}` };
}

/** Sparkline as SVG polyline points, normalized into a w x h box. */
export function sparklinePoints(counts: number[], w = 120, h = 28): string {
  if (counts.length === 0) {
    return "";
  }
  const peak = Math.max(...counts, 1);
  const step = counts.length > 1 ? w / (counts.length - 1) : 0;
  return counts
    .map((c, i) => `${(i * step).toFixed(1)},${(h - (c / peak) * h).toFixed(1)}`)
    .join(" ");
}
