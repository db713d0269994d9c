/** Wire types for the session service (JSON bodies as served). */

export type Vec2 = [number, number];
export type Rgba = [number, number, number, number];

export interface EulerView {
  yaw: number;
  pitch: number;
  roll: number;
}

export interface PartTopologyDoc {
  part_id: string;
  vertex_count: number;
  triangles: number[][];
}

/** Per-part authored record at one key view; vertices are anchor-local. */
export interface PartViewDoc {
  anchor: Vec2;
  vertices: Vec2[];
  color: Rgba;
  depth_override?: number;
}

export interface KeyViewDoc {
  view: EulerView & { matrix?: number[][] };
  parts: Record<string, PartViewDoc>;
}

export interface ModelDoc {
  format_version: 1;
  parts: PartTopologyDoc[];
  key_views: KeyViewDoc[];
  solved?: Record<string, { anchor3d: number[]; distortions: Vec2[] }>;
  reference_view_index?: number;
}

/** One blended frame; vertices here are world-placed. */
export interface FramePartDoc {
  part_id: string;
  position: Vec2;
  depth: number;
  color: Rgba;
  vertices: Vec2[];
}

export interface FrameDoc {
  parts: FramePartDoc[];
  draw_order: number[];
}

export interface SolveDiagnostics {
  residuals: Record<string, number>;
  distortion_norms: Record<string, number[]>;
}

export interface SessionInfo {
  session_id: string;
  key_view_count: number;
}
