// SVG builders for the country circle and the session trail. Pure
// string-in string-out so they can be tested without a DOM. Pixel
// placement is the only arithmetic here; every probability shown is the
// exact serialized form of a number the service sent.

import type { Distribution, LayoutResponse, Point } from "./types.js";

export const SIZE = 520;
const CENTER = SIZE / 2;
const RADIUS = 210;
const LABEL_RADIUS = 232;

export function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function pxX(x: number): string {
  return (CENTER + x * RADIUS).toFixed(2);
}

function pxY(y: number): string {
  // service layout has +y up, SVG has +y down
  return (CENTER - y * RADIUS).toFixed(2);
}

function labelAttrs(x: number, y: number): string {
  const lx = (CENTER + x * LABEL_RADIUS).toFixed(2);
  const ly = (CENTER - y * LABEL_RADIUS).toFixed(2);
  const anchor = x < -0.15 ? "end" : x > 0.15 ? "start" : "middle";
  const dy = y < -0.15 ? "0.9em" : y > 0.15 ? "0" : "0.35em";
  return `x="${lx}" y="${ly}" text-anchor="${anchor}" dy="${dy}"`;
}

function countryNode(name: string, x: number, y: number, prob: number | undefined): string {
  const safe = escapeXml(name);
  const probAttr = prob === undefined ? "" : ` data-prob="${String(prob)}"`;
  const title = prob === undefined ? name : `${name} ${String(prob)}`;
  return [
    `<g class="country" data-country="${safe}"${probAttr}>`,
    `<title>${escapeXml(title)}</title>`,
    `<circle cx="${pxX(x)}" cy="${pxY(y)}" r="4"/>`,
    `<text ${labelAttrs(x, y)}>${safe}</text>`,
    `</g>`,
  ].join("");
}

function trailNodes(trail: Point[]): string {
  if (trail.length === 0) {
    return "";
  }
  const parts: string[] = [];
  if (trail.length >= 2) {
    const points = trail.map((p) => `${pxX(p.x)},${pxY(p.y)}`).join(" ");
    parts.push(`<polyline class="trail-line" points="${points}" fill="none"/>`);
  }
  trail.forEach((p, step) => {
    const current = step === trail.length - 1;
    const cls = current ? "trail-point current" : "trail-point";
    const r = current ? 6 : 4;
    parts.push(
      `<circle class="${cls}" data-step="${step}" data-x="${String(p.x)}" ` +
        `data-y="${String(p.y)}" cx="${pxX(p.x)}" cy="${pxY(p.y)}" r="${r}"/>`,
    );
    parts.push(
      `<text class="step-label" x="${pxX(p.x)}" y="${(CENTER - p.y * RADIUS - 9).toFixed(2)}" ` +
        `text-anchor="middle">${step}</text>`,
    );
  });
  return parts.join("");
}

/**
 * Render the Newton diagram: all countries on the unit circle, then the
 * session trail oldest to newest with step markers. An empty trail
 * yields the bare circle, a one-point trail a single marker, and only
 * two or more points produce the connecting polyline.
 */
export function renderDiagram(
  layout: LayoutResponse,
  trail: Point[],
  distribution?: Distribution,
): string {
  const countries = Object.entries(layout.countries)
    .map(([name, [x, y]]) => countryNode(name, x, y, distribution?.[name]))
    .join("");
  return [
    `<svg class="diagram" viewBox="0 0 ${SIZE} ${SIZE}" xmlns="http://www.w3.org/2000/svg" role="img">`,
    `<circle class="rim" cx="${CENTER}" cy="${CENTER}" r="${RADIUS}" fill="none"/>`,
    countries,
    trailNodes(trail),
    `</svg>`,
  ].join("");
}
