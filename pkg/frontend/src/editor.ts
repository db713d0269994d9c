/** Whole-part deformers and vertex editing for one authored key-view record.
 *
 * Records store vertices anchor-local, so translation moves the anchor while
 * rotation, scaling, and vertex drags rewrite the local shape about it.
 * Every function returns a new record; the caller PUTs it to the service,
 * which remains the source of truth (flipped triangles come back as 400 and
 * are surfaced inline, never applied locally).
 */

import type { PartViewDoc, Vec2 } from "./types.js";

function withVertices(record: PartViewDoc, vertices: Vec2[]): PartViewDoc {
  const out: PartViewDoc = {
    anchor: [record.anchor[0], record.anchor[1]],
    vertices,
    color: [...record.color] as PartViewDoc["color"],
  };
  if (record.depth_override !== undefined) {
    out.depth_override = record.depth_override;
  }
  return out;
}

export function translatePart(
  record: PartViewDoc,
  dx: number,
  dy: number,
): PartViewDoc {
  const out = withVertices(record, record.vertices.map((v) => [...v] as Vec2));
  out.anchor = [record.anchor[0] + dx, record.anchor[1] + dy];
  return out;
}

export function rotatePart(record: PartViewDoc, degrees: number): PartViewDoc {
  const t = (degrees * Math.PI) / 180;
  const [c, s] = [Math.cos(t), Math.sin(t)];
  return withVertices(
    record,
    record.vertices.map(([x, y]) => [c * x - s * y, s * x + c * y]),
  );
}

export function scalePart(record: PartViewDoc, factor: number): PartViewDoc {
  if (!(factor > 0)) {
    throw new Error("scale factor must be positive");
  }
  return withVertices(
    record,
    record.vertices.map(([x, y]) => [factor * x, factor * y]),
  );
}

/** Drag one vertex to an absolute (world) position. */
export function moveVertex(
  record: PartViewDoc,
  index: number,
  worldX: number,
  worldY: number,
): PartViewDoc {
  if (index < 0 || index >= record.vertices.length) {
    throw new Error(`vertex index ${index} out of range`);
  }
  const vertices = record.vertices.map((v) => [...v] as Vec2);
  vertices[index] = [worldX - record.anchor[0], worldY - record.anchor[1]];
  return withVertices(record, vertices);
}

/** Absolute vertex positions (for hit testing and drag feedback). */
export function worldVertices(record: PartViewDoc): Vec2[] {
  return record.vertices.map(([x, y]) => [
    x + record.anchor[0],
    y + record.anchor[1],
  ]);
}
