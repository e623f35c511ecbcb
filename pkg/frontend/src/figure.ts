import { SweepRow } from "./csv.js";
import { Curve, extractCurves, GroupField, YField } from "./stats.js";

export interface FigureSpec {
  y: YField;
  group: GroupField;
  title?: string;
  width?: number;
  height?: number;
}

export interface Figure {
  svg: string;
  curves: Curve[];
}

export interface CurveData {
  y: YField;
  group: GroupField;
  curves: Curve[];
}

const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                 "#8c564b", "#17becf", "#7f7f7f"];

const Y_LABELS: Record<YField, string> = {
  delegated_fraction: "delegated fraction",
  approx_quality: "approximation quality (1 / ratio)",
};

const MARGIN = { top: 40, right: 168, bottom: 48, left: 60 };

function fmt(v: number): string {
  return v.toFixed(2);
}

function tickLabel(v: number): string {
  return Number.isInteger(v) ? String(v) : String(Number(v.toFixed(4)));
}

/** Grouped mean curves with +-1 std bands as a standalone SVG.  The
 * numeric curve data is embedded verbatim in a metadata element so the
 * values painted can be read back without re-aggregating. */
export function renderFigure(rows: SweepRow[], spec: FigureSpec): Figure {
  const curves = extractCurves(rows, spec.y, spec.group);
  if (curves.length === 0) throw new Error("no rows to plot");
  const width = spec.width ?? 640;
  const height = spec.height ?? 420;
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;

  const xs = [...new Set(curves.flatMap((c) => c.points.map((p) => p.x)))]
    .sort((a, b) => a - b);
  let xMin = xs[0];
  let xMax = xs[xs.length - 1];
  if (xMin === xMax) {
    xMin -= 0.5;
    xMax += 0.5;
  }
  const yMax = Math.max(1, ...curves.flatMap(
    (c) => c.points.map((p) => p.mean + p.std)));
  const sx = (x: number) => MARGIN.left + ((x - xMin) / (xMax - xMin)) * plotW;
  const sy = (y: number) => MARGIN.top + (1 - y / yMax) * plotH;

  const data: CurveData = { y: spec.y, group: spec.group, curves };
  const title = spec.title ??
    `${Y_LABELS[spec.y]} vs lambda by ${spec.group}`;
  const parts: string[] = [];
  parts.push(`<svg xmlns="http://www.w3.org/2000/svg" width="${width}" ` +
             `height="${height}" viewBox="0 0 ${width} ${height}" ` +
             `font-family="Helvetica, Arial, sans-serif">`);
  parts.push(`<metadata id="curve-data">${JSON.stringify(data)}</metadata>`);
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  parts.push(`<text x="${fmt(width / 2)}" y="24" text-anchor="middle" ` +
             `font-size="15">${title}</text>`);

  // axes and ticks
  const axisY = MARGIN.top + plotH;
  parts.push(`<g stroke="#333" stroke-width="1">` +
             `<line x1="${fmt(MARGIN.left)}" y1="${fmt(axisY)}" ` +
             `x2="${fmt(MARGIN.left + plotW)}" y2="${fmt(axisY)}"/>` +
             `<line x1="${fmt(MARGIN.left)}" y1="${fmt(MARGIN.top)}" ` +
             `x2="${fmt(MARGIN.left)}" y2="${fmt(axisY)}"/></g>`);
  for (const x of xs) {
    parts.push(`<line x1="${fmt(sx(x))}" y1="${fmt(axisY)}" ` +
               `x2="${fmt(sx(x))}" y2="${fmt(axisY + 5)}" stroke="#333"/>`);
    parts.push(`<text x="${fmt(sx(x))}" y="${fmt(axisY + 19)}" ` +
               `text-anchor="middle" font-size="11">${tickLabel(x)}</text>`);
  }
  for (let i = 0; i <= 4; i++) {
    const v = (yMax * i) / 4;
    parts.push(`<line x1="${fmt(MARGIN.left - 5)}" y1="${fmt(sy(v))}" ` +
               `x2="${fmt(MARGIN.left)}" y2="${fmt(sy(v))}" stroke="#333"/>`);
    parts.push(`<text x="${fmt(MARGIN.left - 9)}" y="${fmt(sy(v) + 4)}" ` +
               `text-anchor="end" font-size="11">${tickLabel(v)}</text>`);
  }
  parts.push(`<text x="${fmt(MARGIN.left + plotW / 2)}" ` +
             `y="${fmt(height - 10)}" text-anchor="middle" font-size="13">` +
             `lambda (number of dReps)</text>`);
  parts.push(`<text x="16" y="${fmt(MARGIN.top + plotH / 2)}" ` +
             `text-anchor="middle" font-size="13" transform="rotate(-90 16 ` +
             `${fmt(MARGIN.top + plotH / 2)})">${Y_LABELS[spec.y]}</text>`);

  // one band + line + markers per group value
  curves.forEach((curve, idx) => {
    const color = PALETTE[idx % PALETTE.length];
    if (curve.points.length > 1) {
      const upper = curve.points.map(
        (p) => `${fmt(sx(p.x))},${fmt(sy(Math.min(yMax, p.mean + p.std)))}`);
      const lower = [...curve.points].reverse().map(
        (p) => `${fmt(sx(p.x))},${fmt(sy(Math.max(0, p.mean - p.std)))}`);
      parts.push(`<polygon points="${upper.join(" ")} ${lower.join(" ")}" ` +
                 `fill="${color}" fill-opacity="0.15" stroke="none"/>`);
      const line = curve.points.map(
        (p) => `${fmt(sx(p.x))},${fmt(sy(p.mean))}`).join(" ");
      parts.push(`<polyline points="${line}" fill="none" ` +
                 `stroke="${color}" stroke-width="1.8"/>`);
    }
    for (const p of curve.points) {
      parts.push(`<circle cx="${fmt(sx(p.x))}" cy="${fmt(sy(p.mean))}" ` +
                 `r="2.6" fill="${color}"/>`);
    }
  });

  // legend
  const legendX = MARGIN.left + plotW + 14;
  curves.forEach((curve, idx) => {
    const color = PALETTE[idx % PALETTE.length];
    const ly = MARGIN.top + 8 + idx * 20;
    parts.push(`<line x1="${fmt(legendX)}" y1="${fmt(ly)}" ` +
               `x2="${fmt(legendX + 22)}" y2="${fmt(ly)}" ` +
               `stroke="${color}" stroke-width="1.8"/>`);
    parts.push(`<text x="${fmt(legendX + 28)}" y="${fmt(ly + 4)}" ` +
               `font-size="12">${spec.group} = ${tickLabel(curve.group)}</text>`);
  });

  parts.push("</svg>");
  return { svg: parts.join("\n"), curves };
}

/** Read back the numeric curve data embedded by renderFigure. */
export function curvesFromSvg(svg: string): CurveData {
  const match = svg.match(/<metadata id="curve-data">(.*?)<\/metadata>/s);
  if (!match) throw new Error("no curve-data metadata in SVG");
  return JSON.parse(match[1]) as CurveData;
}
