import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import { parseSweepCsv, SweepRow } from "../src/csv.js";
import { curvesFromSvg, renderFigure } from "../src/figure.js";
import { YField } from "../src/stats.js";

const GOLDEN = fileURLToPath(
  new URL("../../data/mini/golden_sweep.csv", import.meta.url));

/** Independent re-aggregation with its own bucketing, kept separate
 * from the implementation under test. */
function groupMeans(rows: SweepRow[], y: YField): Map<string, number> {
  const sums = new Map<string, { total: number; count: number }>();
  for (const r of rows) {
    const value = y === "delegated_fraction"
      ? r.delegatedFraction
      : (Number.isFinite(r.approxRatio) ? 1 / r.approxRatio : 0);
    const key = `${r.lambda}|${r.kRatio}`;
    const cell = sums.get(key) ?? { total: 0, count: 0 };
    cell.total += value;
    cell.count += 1;
    sums.set(key, cell);
  }
  return new Map([...sums].map(([k, v]) => [k, v.total / v.count]));
}

describe("golden sweep figures", () => {
  it("renders both figure families with curve values equal to the group means", () => {
    const before = readFileSync(GOLDEN);
    const rows = parseSweepCsv(before.toString("utf8"));
    expect(rows).toHaveLength(2800);

    const dir = mkdtempSync(join(tmpdir(), "figure-kit-"));
    for (const y of ["delegated_fraction", "approx_quality"] as const) {
      const { svg } = renderFigure(rows, { y, group: "k_ratio" });
      const out = join(dir, `${y}.svg`);
      writeFileSync(out, svg + "\n");

      const data = curvesFromSvg(readFileSync(out, "utf8"));
      expect(data.y).toBe(y);
      const expected = groupMeans(rows, y);
      const seen: string[] = [];
      for (const curve of data.curves) {
        for (const point of curve.points) {
          const key = `${point.x}|${curve.group}`;
          seen.push(key);
          expect(Math.abs(point.mean - expected.get(key)!))
            .toBeLessThanOrEqual(1e-9);
        }
      }
      expect(seen.sort()).toEqual([...expected.keys()].sort());
      expect(data.curves).toHaveLength(5);
      for (const curve of data.curves) {
        expect(curve.points.map((p) => p.x)).toEqual([0, 1, 2, 3, 4, 5, 6]);
      }
    }

    expect(readFileSync(GOLDEN).equals(before)).toBe(true);
  });
});
