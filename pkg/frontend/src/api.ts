// API client. One in-flight request per channel: starting a new request on
// a channel aborts the previous one (last write wins on viewport changes).

import { ParcelDetail, PlatformsResponse, ViewLayer } from "./types.js";

export class NotFoundError extends Error {}
export class CancelledError extends Error {}

type FetchLike = (url: string, init?: { signal?: AbortSignal }) => Promise<Response>;

export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchFn: FetchLike;
  private readonly inflight = new Map<string, AbortController>();

  constructor(baseUrl: string, fetchFn?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    this.fetchFn = fetchFn ?? ((url, init) => fetch(url, init));
  }

  private async get<T>(channel: string, path: string): Promise<T> {
    this.inflight.get(channel)?.abort();
    const controller = new AbortController();
    this.inflight.set(channel, controller);
    let response: Response;
    try {
      response = await this.fetchFn(this.baseUrl + path, { signal: controller.signal });
    } catch (err) {
      if ((err as Error).name === "AbortError") {
        throw new CancelledError(path);
      }
      throw err;
    } finally {
      if (this.inflight.get(channel) === controller) {
        this.inflight.delete(channel);
      }
    }
    if (response.status === 404) {
      throw new NotFoundError(path);
    }
    if (!response.ok) {
      throw new Error(`${path} -> HTTP ${response.status}`);
    }
    return (await response.json()) as T;
  }

  platforms(): Promise<PlatformsResponse> {
    return this.get("platforms", "/v1/platforms");
  }

  viewLayer(platform: string, viewId: string): Promise<ViewLayer> {
    return this.get("layer", `/v1/${platform}/views/${viewId}`);
  }

  parcelDetail(platform: string, tokenId: number): Promise<ParcelDetail> {
    return this.get("detail", `/v1/${platform}/parcels/${tokenId}`);
  }
}
