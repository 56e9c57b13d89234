import init, { sizeSweep, leaderSweep, gramian } from "./pkg/netgram_wasm.js";

const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd"];

// Infinite values arrive as null.
const finite = (v) => v !== null && Number.isFinite(v);

function gammaValue(text) {
  const t = text.trim();
  return t === "" || t === "auto" ? 0 : Number(t);
}

function report(section, err) {
  section.querySelector(".error").textContent = err ? String(err.message ?? err) : "";
}

// Draws series of {x, y} points on a log10 y axis.
function plot(canvas, series, { xLabel, yLabel, logX = false }) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = { l: 70, r: 20, t: 15, b: 45 };
  ctx.clearRect(0, 0, w, h);

  const pts = series.flatMap((s) => s.points).filter((p) => finite(p.y) && p.y > 0);
  if (pts.length === 0) return;
  const fx = logX ? Math.log10 : (v) => v;
  const xs = pts.map((p) => fx(p.x));
  const ys = pts.map((p) => Math.log10(p.y));
  let [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  let [y0, y1] = [Math.floor(Math.min(...ys)), Math.ceil(Math.max(...ys))];
  if (x0 === x1) [x0, x1] = [x0 - 1, x1 + 1];
  if (y0 === y1) [y0, y1] = [y0 - 1, y1 + 1];
  const px = (x) => pad.l + ((fx(x) - x0) / (x1 - x0)) * (w - pad.l - pad.r);
  const py = (y) => h - pad.b - ((Math.log10(y) - y0) / (y1 - y0)) * (h - pad.t - pad.b);

  ctx.strokeStyle = "#999";
  ctx.fillStyle = "#444";
  ctx.font = "12px system-ui";
  ctx.strokeRect(pad.l, pad.t, w - pad.l - pad.r, h - pad.t - pad.b);
  const yStep = Math.max(1, Math.ceil((y1 - y0) / 8));
  for (let e = y0; e <= y1; e += yStep) {
    const y = py(10 ** e);
    ctx.fillText(`1e${e}`, 8, y + 4);
    ctx.beginPath();
    ctx.moveTo(pad.l - 4, y);
    ctx.lineTo(pad.l, y);
    ctx.stroke();
  }
  for (let i = 0; i <= 5; i++) {
    const v = x0 + ((x1 - x0) * i) / 5;
    const label = logX ? (10 ** v).toPrecision(2) : String(Math.round(v * 100) / 100);
    const x = pad.l + (i / 5) * (w - pad.l - pad.r);
    ctx.fillText(label, x - 10, h - pad.b + 16);
  }
  ctx.fillText(xLabel, w / 2 - 20, h - 8);
  ctx.save();
  ctx.translate(14, h / 2 + 30);
  ctx.rotate(-Math.PI / 2);
  ctx.fillText(yLabel, 0, 0);
  ctx.restore();

  series.forEach((s, k) => {
    ctx.strokeStyle = ctx.fillStyle = s.color ?? COLORS[k % COLORS.length];
    ctx.setLineDash(s.dashed ? [6, 4] : []);
    ctx.beginPath();
    let drawing = false;
    for (const p of s.points) {
      if (!(finite(p.y) && p.y > 0)) {
        drawing = false;
        continue;
      }
      drawing ? ctx.lineTo(px(p.x), py(p.y)) : ctx.moveTo(px(p.x), py(p.y));
      drawing = true;
    }
    if (!s.pointsOnly) ctx.stroke();
    for (const p of s.points) {
      if (finite(p.y) && p.y > 0) ctx.fillRect(px(p.x) - 2, py(p.y) - 2, 4, 4);
    }
  });
  ctx.setLineDash([]);
}

function legend(section, series) {
  section.querySelector(".legend").innerHTML = series
    .map((s, k) => `<span><i style="background:${s.color ?? COLORS[k % COLORS.length]}"></i>${s.name}</span>`)
    .join("");
}

function runSize() {
  const section = document.getElementById("size");
  const f = section.querySelector("form").elements;
  try {
    const data = JSON.parse(
      sizeSweep(f.family.value, f.directed.value === "1", +f.nmin.value, +f.nmax.value, +f.step.value, gammaValue(f.gamma.value)),
    );
    const pick = (key) => data.rows.map((r) => ({ x: r.n, y: r[key] }));
    const series = [
      { name: "measured κ", points: pick("kappa") },
      { name: "singular-value bound", points: pick("bound_eq4"), dashed: true },
      { name: "family closed form", points: pick("bound_family"), dashed: true, pointsOnly: true },
      { name: "local-bound (γ²/(γ²−M²))", points: pick("bound_theorem2"), dashed: true },
    ];
    plot(section.querySelector("canvas"), series, { xLabel: `N (${data.family}, γ = ${data.gamma.toPrecision(5)})`, yLabel: "κ" });
    legend(section, series);
    report(section, null);
  } catch (e) {
    report(section, e);
  }
}

function runLeaders() {
  const section = document.getElementById("leaders");
  const f = section.querySelector("form").elements;
  try {
    const rows = JSON.parse(leaderSweep(+f.n.value, Number(f.gamma.value), +f.divisors.value, +f.block.value));
    const regime = (name) => rows.filter((r) => r.regime === name).map((r) => ({ x: r.fraction, y: r.lambda_min }));
    const compare = rows.filter((r) => r.regime === "compare");
    const series = [
      { name: "one spread leader per block (block length varies)", points: regime("block-length") },
      { name: "leaders clustered per block (fixed block length)", points: regime("leaders-per-block") },
      ...compare.map((r, k) => ({
        name: `${r.placement} at ${r.fraction_label}: λ_min = ${r.lambda_min.toExponential(3)}`,
        points: [{ x: r.fraction, y: r.lambda_min }],
        pointsOnly: true,
        color: COLORS[2 + k],
      })),
    ];
    plot(section.querySelector("canvas"), series, { xLabel: "leader fraction", yLabel: "λ_min", logX: true });
    legend(section, series);
    report(section, null);
  } catch (e) {
    report(section, e);
  }
}

// Blue (small) to yellow (large) on log10 |G_ij|.
function colour(t) {
  const r = Math.round(255 * Math.min(1, Math.max(0, 1.6 * t - 0.4)));
  const g = Math.round(255 * Math.min(1, Math.max(0, 1.3 * t)));
  const b = Math.round(255 * Math.max(0, 0.8 - t));
  return `rgb(${r},${g},${b})`;
}

function runHeatmap() {
  const section = document.getElementById("heatmap");
  const f = section.querySelector("form").elements;
  try {
    const data = JSON.parse(
      gramian(f.family.value, f.directed.value === "1", +f.n.value, gammaValue(f.gamma.value), f.leaders.value),
    );
    const canvas = section.querySelector("canvas");
    const ctx = canvas.getContext("2d");
    const n = data.n;
    const cell = canvas.width / n;
    const logs = data.entries.map((v) => (v === 0 ? -Infinity : Math.log10(Math.abs(v))));
    const fin = logs.filter(Number.isFinite);
    const hi = Math.max(...fin);
    const lo = Math.max(Math.min(...fin), hi - 16);
    ctx.fillStyle = "#000";
    ctx.fillRect(0, 0, canvas.width, canvas.height);
    for (let i = 0; i < n; i++) {
      for (let j = 0; j < n; j++) {
        const v = logs[i * n + j];
        if (!Number.isFinite(v)) continue;
        ctx.fillStyle = colour(hi === lo ? 1 : (Math.max(v, lo) - lo) / (hi - lo));
        ctx.fillRect(j * cell, i * cell, Math.ceil(cell), Math.ceil(cell));
      }
    }
    const kappa = finite(data.kappa) ? data.kappa.toPrecision(6) : "∞ (not positive definite)";
    section.querySelector(".summary").textContent = [
      `γ = ${data.gamma.toPrecision(6)}, leaders = ${data.leaders}`,
      `κ = ${kappa}`,
      `λ_min = ${data.lambda_min.toExponential(4)}`,
      `colour range 1e${lo.toFixed(1)} .. 1e${hi.toFixed(1)} (black = 0)`,
      "",
      "eigenvalues:",
      ...data.eigenvalues.map((v, k) => `${String(k + 1).padStart(4)}  ${v.toExponential(6)}`),
    ].join("\n");
    report(section, null);
  } catch (e) {
    report(section, e);
  }
}

const handlers = { size: runSize, leaders: runLeaders, heatmap: runHeatmap };

await init();
for (const [id, run] of Object.entries(handlers)) {
  document.querySelector(`#${id} form`).addEventListener("submit", (ev) => {
    ev.preventDefault();
    run();
  });
  run();
}
