// Static chord-style summary: one arc for the subject concept, one arc
// per partner category, and a ribbon between them whose thickness grows
// with the logarithm of the relation count in that category. Pure
// geometry; the exact numbers stay in the table next to it.

import { svgEl } from "../dom.js";
import type { RelatedRow } from "../api.js";

const SIZE = 320;
const CENTER = SIZE / 2;
const RADIUS = 120;
const ARC_WIDTH = 14;

interface CategorySlice {
  category: string;
  weight: number;
}

function polar(angleDeg: number, radius: number): [number, number] {
  const rad = (angleDeg * Math.PI) / 180;
  return [CENTER + radius * Math.cos(rad), CENTER + radius * Math.sin(rad)];
}

function arcPath(startDeg: number, endDeg: number): string {
  const [x1, y1] = polar(startDeg, RADIUS);
  const [x2, y2] = polar(endDeg, RADIUS);
  const large = Math.abs(endDeg - startDeg) > 180 ? 1 : 0;
  return `M ${x1} ${y1} A ${RADIUS} ${RADIUS} 0 ${large} 1 ${x2} ${y2}`;
}

function ribbonPath(fromDeg: number, toDeg: number): string {
  const inner = RADIUS - ARC_WIDTH;
  const [x1, y1] = polar(fromDeg, inner);
  const [x2, y2] = polar(toDeg, inner);
  return `M ${x1} ${y1} Q ${CENTER} ${CENTER} ${x2} ${y2}`;
}

export function renderCategorySummary(
  subjectId: string,
  rows: RelatedRow[],
): SVGSVGElement {
  const svg = svgEl("svg", {
    class: "category-summary",
    viewBox: `0 0 ${SIZE} ${SIZE}`,
    role: "img",
    "aria-label": `relation categories of ${subjectId}`,
  });
  const weights = new Map<string, number>();
  for (const row of rows) {
    const category = row.category ?? "uncategorized";
    weights.set(category, (weights.get(category) ?? 0) + row.count);
  }
  const slices: CategorySlice[] = [...weights.entries()]
    .map(([category, total]) => ({ category, weight: Math.log2(1 + total) }))
    .sort((a, b) => a.category.localeCompare(b.category));
  if (slices.length === 0) return svg;

  // Subject on the left half, partner categories share the right half.
  svg.append(svgEl("path", {
    class: "arc arc-subject",
    d: arcPath(110, 250),
    "stroke-width": String(ARC_WIDTH),
    "data-subject": subjectId,
  }));
  const totalWeight = slices.reduce((sum, s) => sum + s.weight, 0);
  const span = 160; // degrees available on the right, from -80 to 80
  const gap = 4;
  let cursor = -80;
  for (const slice of slices) {
    const extent = Math.max(
      (span - gap * slices.length) * (slice.weight / totalWeight), 2);
    const mid = cursor + extent / 2;
    svg.append(svgEl("path", {
      class: "arc arc-category",
      d: arcPath(cursor, cursor + extent),
      "stroke-width": String(ARC_WIDTH),
      "data-category": slice.category,
    }));
    svg.append(svgEl("path", {
      class: "ribbon",
      d: ribbonPath(180, mid),
      "stroke-width": String(2 + 3 * slice.weight),
      "data-category": slice.category,
    }));
    const [lx, ly] = polar(mid, RADIUS + 12);
    svg.append(svgEl("text", {
      class: "arc-label",
      x: String(lx),
      y: String(ly),
      "text-anchor": mid > -90 && mid < 90 ? "start" : "end",
    }, slice.category));
    cursor += extent + gap;
  }
  const [sx, sy] = polar(180, RADIUS + 12);
  svg.append(svgEl("text", {
    class: "arc-label subject-label",
    x: String(sx),
    y: String(sy),
    "text-anchor": "end",
  }, subjectId));
  return svg;
}
