export { CsvError, parseSweepCsv, SWEEP_HEADER } from "./csv.js";
export type { SweepRow } from "./csv.js";
export { extractCurves, groupValue, GROUP_FIELDS, Y_FIELDS, yValue } from "./stats.js";
export type { Curve, CurvePoint, GroupField, YField } from "./stats.js";
export { curvesFromSvg, renderFigure } from "./figure.js";
export type { CurveData, Figure, FigureSpec } from "./figure.js";
export { main } from "./cli.js";
