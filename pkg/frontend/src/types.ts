// Wire types for the land-market read API. These mirror the served JSON
// exactly; the explorer never reshapes numbers, it only displays them.

export interface PlatformInfo {
  platform: string;
  n_parcels: number;
  n_trades: number;
  date_range: { start: string; end: string } | null;
  views: string[];
  has_model: boolean;
}

export interface PlatformsResponse {
  platforms: PlatformInfo[];
}

export interface ViewEntry {
  token_id: number;
  x: number;
  y: number;
  metric: number | null;
  color: number | null;
}

export interface ViewLayer {
  platform: string;
  view_id: string;
  generated_at: string;
  legend: number[];
  entries: ViewEntry[];
}

export interface TradeRecord {
  token_id: number;
  timestamp: string;
  exchange: string;
  currency: string;
  amount_crypto: number;
  amount_usd: number;
}

export interface ListingRecord {
  token_id: number;
  exchange: string;
  price_currency: string;
  price_amount: number;
  price_usd: number;
  observed_date: string;
}

export interface TrafficPoint {
  date: string;
  count: number;
}

export interface ParcelDetail {
  parcel: {
    platform: string;
    token_id: number;
    x: number;
    y: number;
    geometry: { kind: string } & Record<string, unknown>;
    estate_id: string | null;
    distance_to_nearest_poi: number | null;
  };
  last_trade: TradeRecord | null;
  current_listing: ListingRecord | null;
  flip_count: number;
  fair_value_usd: number | null;
  traffic_30d: TrafficPoint[];
}
