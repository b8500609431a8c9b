import init, { scattershotCurve, lossComparison, homodyneEstimate } from "./pkg/cvbs_demo.js";

const $ = (id) => document.getElementById(id);

function bind(id, format = (v) => v) {
  const input = $(id);
  const out = $(`${id}-out`);
  const show = () => { if (out) out.textContent = format(input.value); };
  show();
  input.addEventListener("input", show);
  return input;
}

function axes(ctx, w, h, pad, yMax, xLabel) {
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.beginPath();
  ctx.moveTo(pad, pad / 2);
  ctx.lineTo(pad, h - pad);
  ctx.lineTo(w - pad / 2, h - pad);
  ctx.stroke();
  ctx.fillStyle = "#444";
  ctx.font = "12px system-ui";
  ctx.fillText(yMax.toPrecision(3), 4, pad / 2 + 10);
  ctx.fillText("0", pad - 12, h - pad + 4);
  ctx.fillText(xLabel, w / 2, h - 8);
}

function run(target, fn) {
  try {
    fn();
    target.classList.remove("error");
  } catch (e) {
    target.textContent = String(e.message ?? e);
    target.classList.add("error");
  }
}

function drawScattershot() {
  const n = Number($("ss-n").value);
  const m = Number($("ss-m").value);
  const stats = $("ss-stats");
  run(stats, () => {
    const c = JSON.parse(scattershotCurve(n, m, 400));
    const canvas = $("ss-plot");
    const ctx = canvas.getContext("2d");
    const { width: w, height: h } = canvas;
    const pad = 40;
    const yMax = Math.max(c.peak_probability, ...c.probability) * 1.1;
    axes(ctx, w, h, pad, yMax, "chi");
    const x = (v) => pad + v * (w - 1.5 * pad);
    const y = (v) => h - pad - (v / yMax) * (h - 1.5 * pad);
    ctx.strokeStyle = "#1f5fbf";
    ctx.beginPath();
    c.chi.forEach((v, i) => (i ? ctx.lineTo(x(v), y(c.probability[i])) : ctx.moveTo(x(v), y(c.probability[i]))));
    ctx.stroke();
    ctx.strokeStyle = "#d05000";
    ctx.setLineDash([4, 4]);
    ctx.beginPath();
    ctx.moveTo(x(c.optimal_chi), h - pad);
    ctx.lineTo(x(c.optimal_chi), pad / 2);
    ctx.stroke();
    ctx.setLineDash([]);
    stats.textContent =
      `optimal chi = ${c.optimal_chi.toFixed(6)}   squeezing = ${c.optimal_db.toFixed(4)} dB   ` +
      `P(n) at optimum = ${c.peak_probability.toExponential(4)}`;
  });
}

function drawLoss() {
  const r = Number($("ls-r").value);
  const eta = Number($("ls-eta").value);
  const cutoff = Number($("ls-cut").value);
  const stats = $("ls-stats");
  run(stats, () => {
    const d = JSON.parse(lossComparison(r, eta, cutoff));
    const canvas = $("ls-plot");
    const ctx = canvas.getContext("2d");
    const { width: w, height: h } = canvas;
    const pad = 40;
    const yMax = Math.max(...d.ideal, ...d.lossy) * 1.1;
    axes(ctx, w, h, pad, yMax, "total photons");
    const slot = (w - 1.5 * pad) / d.sectors.length;
    const bar = slot * 0.38;
    const y = (v) => (v / yMax) * (h - 1.5 * pad);
    d.sectors.forEach((n, i) => {
      const x0 = pad + i * slot + slot * 0.1;
      ctx.fillStyle = "#1f5fbf";
      ctx.fillRect(x0, h - pad - y(d.ideal[i]), bar, y(d.ideal[i]));
      ctx.fillStyle = "#d05000";
      ctx.fillRect(x0 + bar, h - pad - y(d.lossy[i]), bar, y(d.lossy[i]));
      ctx.fillStyle = "#444";
      ctx.fillText(String(n), x0 + bar - 3, h - pad + 14);
    });
    stats.textContent =
      `blue: lossless   orange: eta = ${eta}\n` +
      `TVD = ${d.tvd.toExponential(4)}   off-cutoff residual = ${d.residual.toExponential(2)}   ` +
      `captured mass ${d.ideal_mass.toFixed(5)} / ${d.lossy_mass.toFixed(5)}`;
  });
}

function fillTable(table, rows) {
  table.innerHTML = rows.map((row) => `<tr>${row.map((v) => `<td>${v.toFixed(4)}</td>`).join("")}</tr>`).join("");
}

function drawHomodyne() {
  const r = Number($("hd-r").value);
  const k = Math.round(10 ** Number($("hd-k").value));
  const eta = Number($("hd-eta").value);
  const seed = Number($("hd-seed").value) >>> 0;
  const stats = $("hd-stats");
  run(stats, () => {
    const e = JSON.parse(homodyneEstimate(r, k, eta, 0.01, seed));
    fillTable($("hd-truth"), e.truth);
    fillTable($("hd-est"), e.estimate);
    stats.textContent =
      `K = ${e.samples}   max |error| = ${e.max_abs_error.toFixed(4)}   physical: ${e.physical}\n` +
      `band check: ${e.band_ok ? "inside" : "outside"} (margins ${e.lower_margin.toFixed(3)}, ${e.upper_margin.toFixed(3)})\n` +
      `Chernoff failure bound = ${e.failure_bound.toExponential(3)}   K needed for delta = 0.01: ${e.required_samples}\n` +
      `fidelity with the true state = ${e.fidelity.toFixed(6)}`;
  });
}

await init();

for (const id of ["ss-n", "ss-m"]) bind(id).addEventListener("input", drawScattershot);
for (const id of ["ls-r", "ls-eta", "ls-cut"]) bind(id).addEventListener("input", drawLoss);
bind("hd-r");
bind("hd-eta");
bind("hd-k", (v) => Math.round(10 ** Number(v)));
$("hd-run").addEventListener("click", drawHomodyne);

drawScattershot();
drawLoss();
drawHomodyne();
