/** Pure rendering for the two panels (SVG markup strings) plus the view
 * geometry they need: Euler rotation matrices, camera direction, preset
 * views, and key-view dot placement. Keeping these as string builders keeps
 * every visual decision unit-testable without a DOM. */

import type { EulerView, FrameDoc } from "./types.js";

export const PRESETS: Record<string, EulerView> = {
  front: { yaw: 0, pitch: 0, roll: 0 },
  right: { yaw: 90, pitch: 0, roll: 0 },
  left: { yaw: -90, pitch: 0, roll: 0 },
  back: { yaw: 180, pitch: 0, roll: 0 },
  top: { yaw: 0, pitch: 90, roll: 0 },
  bottom: { yaw: 0, pitch: -90, roll: 0 },
};

type Mat3 = number[][];

function matMul(a: Mat3, b: Mat3): Mat3 {
  return a.map((row, i) =>
    row.map((_, j) => a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j]),
  );
}

/** Camera rotation: roll about the viewing axis, then pitch, then yaw
 * (matching the service's yaw/pitch/roll query parameters). */
export function rotationMatrix(view: EulerView): Mat3 {
  const rad = (d: number) => (d * Math.PI) / 180;
  const [cy, sy] = [Math.cos(rad(view.yaw)), Math.sin(rad(view.yaw))];
  const [cx, sx] = [Math.cos(rad(view.pitch)), Math.sin(rad(view.pitch))];
  const [cz, sz] = [Math.cos(rad(view.roll)), Math.sin(rad(view.roll))];
  const ry: Mat3 = [
    [cy, 0, sy],
    [0, 1, 0],
    [-sy, 0, cy],
  ];
  const rx: Mat3 = [
    [1, 0, 0],
    [0, cx, -sx],
    [0, sx, cx],
  ];
  const rz: Mat3 = [
    [cz, -sz, 0],
    [sz, cz, 0],
    [0, 0, 1],
  ];
  return matMul(rz, matMul(rx, ry));
}

/** Unit vector from the model origin toward the camera of `view`. */
export function cameraDirection(view: EulerView): [number, number, number] {
  const r = rotationMatrix(view);
  return [r[2][0], r[2][1], r[2][2]]; // R^T applied to the +z viewing axis
}

export interface PanelOptions {
  width: number;
  height: number;
  scale: number;
}

export const DEFAULT_PANEL: PanelOptions = {
  width: 640,
  height: 480,
  scale: 100,
};

function fmt(x: number): string {
  const s = x.toFixed(3);
  return s === "-0.000" ? "0.000" : s;
}

function rgb([r, g, b]: number[]): string {
  const c = (v: number) => Math.round(v * 255);
  return `rgb(${c(r)},${c(g)},${c(b)})`;
}

function escapeAttr(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/"/g, "&quot;");
}

/** World (x, y) to panel pixels: y points up in the model, down on screen. */
export function toPanel(
  [x, y]: [number, number],
  opts: PanelOptions,
): [number, number] {
  return [opts.width / 2 + opts.scale * x, opts.height / 2 - opts.scale * y];
}

/** The modeling panel: the server frame's polygons, painted back to front,
 * with the selected part outlined. Empty model renders the background only. */
export function renderModelingPanel(
  frame: FrameDoc | null,
  selectedPart: string | null = null,
  opts: PanelOptions = DEFAULT_PANEL,
): string {
  const lines = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${opts.width}" ` +
      `height="${opts.height}" viewBox="0 0 ${opts.width} ${opts.height}">`,
    `<rect width="${opts.width}" height="${opts.height}" fill="#fafafa"/>`,
  ];
  if (frame !== null) {
    for (const index of frame.draw_order) {
      const part = frame.parts[index];
      const points = part.vertices
        .map((v) => toPanel(v, opts).map(fmt).join(","))
        .join(" ");
      const selected = part.part_id === selectedPart;
      const stroke = selected
        ? ' stroke="#1565c0" stroke-width="2"'
        : "";
      lines.push(
        `<polygon data-part="${escapeAttr(part.part_id)}" points="${points}"` +
          ` fill="${rgb(part.color)}" fill-opacity="${fmt(part.color[3])}"` +
          `${stroke}/>`,
      );
    }
  }
  lines.push("</svg>");
  return lines.join("\n");
}

export interface Dot {
  index: number;
  x: number;
  y: number;
  front: boolean; // toward the viewer half of the sphere
}

/** Key-view dots: each key rotation applied to the unit viewing axis and
 * projected orthographically onto the control disc. */
export function dotPositions(
  keyViews: EulerView[],
  size: number,
): Dot[] {
  const radius = size * 0.42;
  return keyViews.map((view, index) => {
    const [x, y, z] = cameraDirection(view);
    return {
      index,
      x: size / 2 + radius * x,
      y: size / 2 - radius * y,
      front: z >= 0,
    };
  });
}

/** The view control panel: orbit disc, key-view dots, current-view cross. */
export function renderViewControl(
  keyViews: EulerView[],
  current: EulerView,
  size = 240,
): string {
  const lines = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${size}" ` +
      `height="${size}" viewBox="0 0 ${size} ${size}">`,
    `<circle cx="${size / 2}" cy="${size / 2}" r="${size * 0.45}" ` +
      `fill="#263238" stroke="#90a4ae"/>`,
  ];
  for (const dot of dotPositions(keyViews, size)) {
    lines.push(
      `<circle class="dot" data-index="${dot.index}" cx="${fmt(dot.x)}" ` +
        `cy="${fmt(dot.y)}" r="6" fill="${dot.front ? "#ffffff" : "#78909c"}"/>`,
    );
  }
  const [cx, cy, cz] = cameraDirection(current);
  const px = size / 2 + size * 0.42 * cx;
  const py = size / 2 - size * 0.42 * cy;
  lines.push(
    `<circle class="current" cx="${fmt(px)}" cy="${fmt(py)}" r="3" ` +
      `fill="${cz >= 0 ? "#ffca28" : "#8d6e63"}"/>`,
  );
  lines.push("</svg>");
  return lines.join("\n");
}
