/**
 * Minimal deterministic SVG chart builder: linear and log10 scales,
 * tick generation, polylines. No timestamps, no randomness; identical
 * input always yields identical bytes.
 */

export interface Scale {
  toPixel(value: number): number;
  ticks(): number[];
  label(value: number): string;
  readonly log: boolean;
}

function fmt(x: number): string {
  // stable short formatting for coordinates
  const s = x.toFixed(2);
  return s === "-0.00" ? "0.00" : s;
}

export function linearScale(
  lo: number,
  hi: number,
  pixLo: number,
  pixHi: number,
  step: number
): Scale {
  const span = hi - lo || 1;
  return {
    log: false,
    toPixel: (v) => pixLo + ((v - lo) / span) * (pixHi - pixLo),
    ticks: () => {
      const out: number[] = [];
      const start = Math.ceil(lo / step) * step;
      for (let t = start; t <= hi + 1e-12; t += step) {
        out.push(Number(t.toFixed(12)));
      }
      return out;
    },
    label: (v) => String(Number(v.toPrecision(6))),
  };
}

export function log10Scale(
  lo: number,
  hi: number,
  pixLo: number,
  pixHi: number
): Scale {
  if (lo <= 0 || hi <= 0) {
    throw new Error("log scale requires positive bounds");
  }
  const llo = Math.log10(lo);
  const lhi = Math.log10(hi);
  const span = lhi - llo || 1;
  return {
    log: true,
    toPixel: (v) => pixLo + ((Math.log10(v) - llo) / span) * (pixHi - pixLo),
    ticks: () => {
      const out: number[] = [];
      for (let e = Math.ceil(llo - 1e-12); e <= Math.floor(lhi + 1e-12); e += 1) {
        out.push(Math.pow(10, e));
      }
      return out;
    },
    label: (v) => {
      const e = Math.round(Math.log10(v));
      return `1e${e}`;
    },
  };
}

export interface Series {
  name: string;
  color: string;
  dashed?: boolean;
  points: Array<[number, number]>;
}

export interface ChartSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  x: Scale;
  y: Scale;
  series: Series[];
  width: number;
  height: number;
  marginLeft: number;
  marginBottom: number;
  marginTop: number;
  marginRight: number;
}

export function renderChart(spec: ChartSpec): string {
  const { width: w, height: h } = spec;
  const x0 = spec.marginLeft;
  const x1 = w - spec.marginRight;
  const y0 = h - spec.marginBottom; // pixel y grows downward
  const y1 = spec.marginTop;
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${w}" height="${h}" viewBox="0 0 ${w} ${h}">`
  );
  parts.push(`<rect width="${w}" height="${h}" fill="white"/>`);
  parts.push(
    `<text x="${fmt(w / 2)}" y="20" text-anchor="middle" font-family="sans-serif" font-size="15">${spec.title}</text>`
  );

  // axes
  parts.push(
    `<line x1="${fmt(x0)}" y1="${fmt(y0)}" x2="${fmt(x1)}" y2="${fmt(y0)}" stroke="black"/>`
  );
  parts.push(
    `<line x1="${fmt(x0)}" y1="${fmt(y0)}" x2="${fmt(x0)}" y2="${fmt(y1)}" stroke="black"/>`
  );
  for (const t of spec.x.ticks()) {
    const px = spec.x.toPixel(t);
    parts.push(
      `<line x1="${fmt(px)}" y1="${fmt(y0)}" x2="${fmt(px)}" y2="${fmt(y0 + 5)}" stroke="black"/>`
    );
    parts.push(
      `<text x="${fmt(px)}" y="${fmt(y0 + 18)}" text-anchor="middle" font-family="sans-serif" font-size="11">${spec.x.label(t)}</text>`
    );
  }
  for (const t of spec.y.ticks()) {
    const py = spec.y.toPixel(t);
    parts.push(
      `<line x1="${fmt(x0 - 5)}" y1="${fmt(py)}" x2="${fmt(x0)}" y2="${fmt(py)}" stroke="black"/>`
    );
    parts.push(
      `<text x="${fmt(x0 - 8)}" y="${fmt(py + 4)}" text-anchor="end" font-family="sans-serif" font-size="11">${spec.y.label(t)}</text>`
    );
  }
  parts.push(
    `<text x="${fmt((x0 + x1) / 2)}" y="${fmt(h - 8)}" text-anchor="middle" font-family="sans-serif" font-size="12">${spec.xLabel}</text>`
  );
  parts.push(
    `<text x="14" y="${fmt((y0 + y1) / 2)}" text-anchor="middle" font-family="sans-serif" font-size="12" transform="rotate(-90 14 ${fmt((y0 + y1) / 2)})">${spec.yLabel}</text>`
  );

  // series polylines and legend
  let legendY = y1 + 6;
  for (const s of spec.series) {
    if (s.points.length === 0) {
      continue;
    }
    const coords = s.points
      .map(([vx, vy]) => `${fmt(spec.x.toPixel(vx))},${fmt(spec.y.toPixel(vy))}`)
      .join(" ");
    const dash = s.dashed ? ` stroke-dasharray="6,4"` : "";
    parts.push(
      `<polyline points="${coords}" fill="none" stroke="${s.color}" stroke-width="1.5"${dash}/>`
    );
    parts.push(
      `<line x1="${fmt(x1 - 110)}" y1="${fmt(legendY)}" x2="${fmt(x1 - 86)}" y2="${fmt(legendY)}" stroke="${s.color}" stroke-width="1.5"${dash}/>`
    );
    parts.push(
      `<text x="${fmt(x1 - 80)}" y="${fmt(legendY + 4)}" font-family="sans-serif" font-size="11">${s.name}</text>`
    );
    legendY += 16;
  }
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
