// Ten-step color scale matching the server's decile legend, plus a neutral
// tone for parcels with no metric.

export const SCALE: readonly string[] = [
  "#2c115f",
  "#51127c",
  "#721f81",
  "#932b80",
  "#b73779",
  "#d8456c",
  "#f1605d",
  "#fc8961",
  "#feb078",
  "#fcfdbf",
];

export const NEUTRAL = "#2b2b31";
export const SELECTION = "#00e5ff";

export function colorForIndex(index: number | null): string {
  if (index === null || index < 0 || index >= SCALE.length) {
    return NEUTRAL;
  }
  return SCALE[index] as string;
}
