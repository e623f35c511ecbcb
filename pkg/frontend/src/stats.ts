import { SweepRow } from "./csv.js";

export type YField = "delegated_fraction" | "approx_quality";
export type GroupField = "k_ratio" | "reveal_ratio";

export const Y_FIELDS: readonly YField[] = ["delegated_fraction", "approx_quality"];
export const GROUP_FIELDS: readonly GroupField[] = ["k_ratio", "reveal_ratio"];

export interface CurvePoint {
  x: number;
  mean: number;
  std: number;
  count: number;
}

export interface Curve {
  group: number;
  points: CurvePoint[];
}

/** Per-row value of the plotted quantity; infinite ratios map to quality 0. */
export function yValue(row: SweepRow, y: YField): number {
  if (y === "delegated_fraction") return row.delegatedFraction;
  return Number.isFinite(row.approxRatio) ? 1 / row.approxRatio : 0;
}

export function groupValue(row: SweepRow, group: GroupField): number {
  return group === "k_ratio" ? row.kRatio : row.revealRatio;
}

/** One curve per distinct group value: mean and population std of the
 * y values over every row sharing (group value, lambda). */
export function extractCurves(rows: SweepRow[], y: YField,
                              group: GroupField): Curve[] {
  const buckets = new Map<number, Map<number, number[]>>();
  for (const row of rows) {
    const g = groupValue(row, group);
    let byX = buckets.get(g);
    if (!byX) {
      byX = new Map();
      buckets.set(g, byX);
    }
    let values = byX.get(row.lambda);
    if (!values) {
      values = [];
      byX.set(row.lambda, values);
    }
    values.push(yValue(row, y));
  }
  const curves: Curve[] = [];
  for (const g of [...buckets.keys()].sort((a, b) => a - b)) {
    const byX = buckets.get(g)!;
    const points: CurvePoint[] = [];
    for (const x of [...byX.keys()].sort((a, b) => a - b)) {
      const values = byX.get(x)!;
      const mean = values.reduce((s, v) => s + v, 0) / values.length;
      const variance =
        values.reduce((s, v) => s + (v - mean) * (v - mean), 0) / values.length;
      points.push({ x, mean, std: Math.sqrt(variance), count: values.length });
    }
    curves.push({ group: g, points });
  }
  return curves;
}
