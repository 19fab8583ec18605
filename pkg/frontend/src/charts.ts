/**
 * Hand-rolled SVG bar charts for cell histograms. Every bar carries its
 * raw count in a data attribute; the dashboard displays API data and
 * never recomputes scores.
 */
import type { CellStats } from "./types.js";

const WIDTH = 260;
const HEIGHT = 120;
const PAD_BOTTOM = 16;
const PAD_TOP = 6;

const SVG_NS = "http://www.w3.org/2000/svg";

function svgElement<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attributes: Record<string, string>,
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attributes)) {
    node.setAttribute(key, value);
  }
  return node;
}

function formatEdge(value: number): string {
  if (value === 0) return "0";
  const magnitude = Math.abs(value);
  if (magnitude >= 1000 || magnitude < 0.01) return value.toExponential(1);
  return value.toPrecision(3);
}

export function renderHistogram(cell: CellStats): SVGSVGElement {
  const { counts, bin_edges } = cell.histogram;
  const svg = svgElement("svg", {
    viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
    width: String(WIDTH),
    height: String(HEIGHT),
    class: "histogram",
    role: "img",
  });
  svg.dataset.totalCount = String(counts.reduce((a, b) => a + b, 0));

  const maxCount = Math.max(...counts, 1);
  const plotHeight = HEIGHT - PAD_BOTTOM - PAD_TOP;
  const barWidth = WIDTH / counts.length;

  counts.forEach((count, index) => {
    const barHeight = (count / maxCount) * plotHeight;
    const bar = svgElement("rect", {
      x: String(index * barWidth),
      y: String(PAD_TOP + plotHeight - barHeight),
      width: String(Math.max(barWidth - 1, 0.5)),
      height: String(barHeight),
      class: "bar",
    });
    bar.dataset.count = String(count);
    const title = svgElement("title", {});
    title.textContent =
      `[${formatEdge(bin_edges[index])}, ${formatEdge(bin_edges[index + 1] ?? bin_edges[index])}]: ${count}`;
    bar.appendChild(title);
    svg.appendChild(bar);
  });

  const low = svgElement("text", {
    x: "2",
    y: String(HEIGHT - 4),
    class: "edge-label",
  });
  low.textContent = formatEdge(bin_edges[0]);
  const high = svgElement("text", {
    x: String(WIDTH - 2),
    y: String(HEIGHT - 4),
    "text-anchor": "end",
    class: "edge-label",
  });
  high.textContent = formatEdge(bin_edges[bin_edges.length - 1]);
  svg.append(low, high);
  return svg;
}
