// Client-side rendering of the server's DOT export: parse the digraph, lay
// the tree out level by level, and emit inline SVG.

export interface DotNode {
  id: string;
  label: string;
  shape: string;
}

export interface DotGraph {
  nodes: Map<string, DotNode>;
  edges: Array<[string, string]>;
}

const NODE_RE = /^\s*(\w+)\s*\[label="((?:[^"\\]|\\.)*)"(?:,\s*shape=(\w+))?\];?$/;
const EDGE_RE = /^\s*(\w+)\s*->\s*(\w+);?$/;

function unescapeLabel(raw: string): string {
  return raw.replace(/\\(.)/g, "$1");
}

export function parseDot(dot: string): DotGraph {
  const nodes = new Map<string, DotNode>();
  const edges: Array<[string, string]> = [];
  for (const line of dot.split("\n")) {
    const edge = EDGE_RE.exec(line);
    if (edge) {
      edges.push([edge[1], edge[2]]);
      continue;
    }
    const node = NODE_RE.exec(line);
    if (node && node[1] !== "node" && node[1] !== "graph") {
      nodes.set(node[1], {
        id: node[1],
        label: unescapeLabel(node[2]),
        shape: node[3] ?? "box",
      });
    }
  }
  return { nodes, edges };
}

interface Placed {
  node: DotNode;
  x: number; // center, in leaf units
  depth: number;
}

export interface Layout {
  placed: Placed[];
  edges: Array<{ from: Placed; to: Placed }>;
  width: number; // in leaf units
  height: number; // in levels
}

export function layoutTree(graph: DotGraph): Layout {
  const children = new Map<string, string[]>();
  const hasParent = new Set<string>();
  for (const [from, to] of graph.edges) {
    children.set(from, [...(children.get(from) ?? []), to]);
    hasParent.add(to);
  }
  const roots = [...graph.nodes.keys()].filter((id) => !hasParent.has(id));
  const placed: Placed[] = [];
  const byId = new Map<string, Placed>();
  let cursor = 0;

  const place = (id: string, depth: number): { center: number; height: number } => {
    const node = graph.nodes.get(id);
    if (!node) return { center: cursor, height: depth };
    const kids = children.get(id) ?? [];
    let center: number;
    let height = depth + 1;
    if (kids.length === 0) {
      center = cursor + 0.5;
      cursor += 1;
    } else {
      const spans = kids.map((kid) => place(kid, depth + 1));
      center = (spans[0].center + spans[spans.length - 1].center) / 2;
      height = Math.max(...spans.map((s) => s.height));
    }
    const entry = { node, x: center, depth };
    placed.push(entry);
    byId.set(id, entry);
    return { center, height };
  };

  let height = 0;
  for (const root of roots) {
    height = Math.max(height, place(root, 0).height);
  }
  const edges = graph.edges.flatMap(([from, to]) => {
    const a = byId.get(from);
    const b = byId.get(to);
    return a && b ? [{ from: a, to: b }] : [];
  });
  return { placed, edges, width: Math.max(cursor, 1), height };
}

const UNIT_W = 96;
const UNIT_H = 72;
const BOX_W = 84;
const BOX_H = 30;

function escapeXml(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function renderDotSvg(dot: string): string {
  const layout = layoutTree(parseDot(dot));
  const width = layout.width * UNIT_W;
  const height = layout.height * UNIT_H;
  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" ` +
      `width="${width}" height="${height}" class="model-graph">`,
  ];
  for (const { from, to } of layout.edges) {
    const x1 = from.x * UNIT_W;
    const y1 = from.depth * UNIT_H + BOX_H;
    const x2 = to.x * UNIT_W;
    const y2 = to.depth * UNIT_H + UNIT_H / 2 - BOX_H / 2;
    parts.push(
      `<line x1="${x1}" y1="${y1}" x2="${x2}" y2="${y2}" stroke="#888"/>`,
    );
  }
  for (const { node, x, depth } of layout.placed) {
    const cx = x * UNIT_W;
    const cy = depth * UNIT_H + UNIT_H / 2;
    if (node.shape === "ellipse" || node.shape === "circle") {
      const rx = node.shape === "circle" ? BOX_H / 2 + 4 : BOX_W / 2;
      parts.push(
        `<ellipse cx="${cx}" cy="${cy - BOX_H / 2}" rx="${rx}" ry="${BOX_H / 2 + 2}" ` +
          `fill="#eef" stroke="#446"/>`,
      );
    } else {
      parts.push(
        `<rect x="${cx - BOX_W / 2}" y="${cy - BOX_H}" width="${BOX_W}" height="${BOX_H}" ` +
          `rx="4" fill="#fff" stroke="#333"/>`,
      );
    }
    parts.push(
      `<text x="${cx}" y="${cy - BOX_H / 2 + 5}" text-anchor="middle" ` +
        `font-size="12">${escapeXml(node.label)}</text>`,
    );
  }
  parts.push("</svg>");
  return parts.join("\n");
}
