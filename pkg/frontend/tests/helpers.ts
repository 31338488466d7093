import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";

import { CellPainter } from "../src/render.js";

export function fixtureText(name: string): string {
  return readFileSync(fileURLToPath(new URL(`./fixtures/${name}`, import.meta.url)), "utf-8");
}

export function fixture<T>(name: string): T {
  return JSON.parse(fixtureText(name)) as T;
}

export type PaintCommand =
  | { op: "clear" }
  | { op: "cell"; x: number; y: number; size: number; fill: string }
  | { op: "outline"; x: number; y: number; size: number; stroke: string }
  | { op: "legend"; swatches: { color: string; upTo: number }[] }
  | { op: "banner"; message: string };

export class RecordingPainter implements CellPainter {
  commands: PaintCommand[] = [];

  clear(): void {
    this.commands.push({ op: "clear" });
  }

  cell(x: number, y: number, size: number, fill: string): void {
    this.commands.push({ op: "cell", x, y, size, fill });
  }

  outline(x: number, y: number, size: number, stroke: string): void {
    this.commands.push({ op: "outline", x, y, size, stroke });
  }

  legend(swatches: { color: string; upTo: number }[]): void {
    this.commands.push({ op: "legend", swatches });
  }

  banner(message: string): void {
    this.commands.push({ op: "banner", message });
  }

  cells(): PaintCommand[] {
    return this.commands.filter((c) => c.op === "cell");
  }

  banners(): string[] {
    return this.commands.filter((c) => c.op === "banner").map((c) => (c as { message: string }).message);
  }

  reset(): void {
    this.commands = [];
  }
}

interface Route {
  body: string;
  status?: number;
}

/** Minimal fetch stand-in: static routes, per-path call counting, optional
 * manual resolution for cancellation tests, AbortSignal support. */
export class FakeFetch {
  calls: string[] = [];
  private routes = new Map<string, Route>();
  private pending = new Map<string, { resolve: () => void }>();
  private holds = new Set<string>();

  route(path: string, body: unknown, status = 200): void {
    this.routes.set(path, { body: typeof body === "string" ? body : JSON.stringify(body), status });
  }

  hold(path: string): void {
    this.holds.add(path);
  }

  release(path: string): void {
    this.pending.get(path)?.resolve();
    this.pending.delete(path);
  }

  countFor(prefix: string): number {
    return this.calls.filter((c) => c.startsWith(prefix)).length;
  }

  fn = async (url: string, init?: { signal?: AbortSignal }): Promise<Response> => {
    const path = url.replace(/^https?:\/\/[^/]+/, "");
    this.calls.push(path);
    const route = this.routes.get(path);
    if (!route) {
      return new Response(JSON.stringify({ error: "no route" }), { status: 404 });
    }
    if (this.holds.has(path)) {
      await new Promise<void>((resolve, reject) => {
        this.pending.set(path, { resolve });
        init?.signal?.addEventListener("abort", () => {
          const abort = new Error("aborted");
          abort.name = "AbortError";
          reject(abort);
        });
      });
    }
    if (init?.signal?.aborted) {
      const abort = new Error("aborted");
      abort.name = "AbortError";
      throw abort;
    }
    return new Response(route.body, { status: route.status ?? 200 });
  };
}
