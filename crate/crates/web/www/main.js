import init, { simulate_json, payoff_curve_json, gini_series_json } from "./pkg/cakecut_web.js";

const $ = (id) => document.getElementById(id);
const COLORS = ["#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac", "#8cd17d", "#d4a6c8"];

function fail(el, e) {
  el.textContent = String(e);
  el.className = "error";
}

function axes(ctx, w, h, pad, xr, yr) {
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  ctx.fillStyle = "#333";
  ctx.font = "11px sans-serif";
  ctx.fillText(xr[0].toFixed(3), pad, h - 4);
  ctx.fillText(xr[1].toFixed(3), w - pad - 30, h - 4);
  ctx.fillText(yr[1].toFixed(2), 2, pad + 4);
  ctx.fillText(yr[0].toFixed(2), 2, h - pad);
  return (x, y) => [
    pad + ((x - xr[0]) / (xr[1] - xr[0])) * (w - 2 * pad),
    h - pad - ((y - yr[0]) / (yr[1] - yr[0])) * (h - 2 * pad),
  ];
}

function line(ctx, pts, color) {
  ctx.strokeStyle = color;
  ctx.beginPath();
  pts.forEach(([x, y], i) => (i ? ctx.lineTo(x, y) : ctx.moveTo(x, y)));
  ctx.stroke();
}

function simulate() {
  const out = $("sim-out");
  out.className = "";
  try {
    const game = JSON.parse(simulate_json($("sim-rule").value, Number($("sim-n").value), $("sim-cut").value));
    const canvas = $("sim-canvas");
    const ctx = canvas.getContext("2d");
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    for (const p of game.pieces) {
      const x0 = p.lo.value * canvas.width;
      const x1 = p.hi.value * canvas.width;
      ctx.fillStyle = COLORS[(p.player - 1) % COLORS.length];
      ctx.fillRect(x0, 0, x1 - x0, canvas.height);
      ctx.fillStyle = "#fff";
      if (x1 - x0 > 24) ctx.fillText("P" + p.player, x0 + 4, canvas.height / 2);
    }
    const shares = game.pieces.map((p) => `P${p.player}: ${p.share.text}`).join("  ");
    const log = game.events.map((e) => JSON.stringify(e)).join("\n");
    out.textContent = `${shares}\ncuts ${game.cuts}, queries ${game.queries}\n\n${log}`;
  } catch (e) {
    fail(out, e);
  }
}

function curve() {
  const out = $("curve-out");
  out.className = "";
  try {
    const n = Number($("curve-n").value);
    const pts = JSON.parse(payoff_curve_json(n, Number($("curve-grid").value)));
    const canvas = $("curve-canvas");
    const ctx = canvas.getContext("2d");
    const xs = pts.map((p) => p.epsilon.value);
    const ys = pts.map((p) => p.payoff.value);
    const to = axes(ctx, canvas.width, canvas.height, 30, [Math.min(...xs), Math.max(...xs)], [0, 1]);
    line(ctx, pts.map((p) => to(p.epsilon.value, p.payoff.value)), "#4e79a7");
    out.textContent = `${pts.length} cuts; peak ${Math.max(...ys)} at epsilon 0; slopes ${n} left, ${(n / (n - 1)).toFixed(3)} right`;
  } catch (e) {
    fail(out, e);
  }
}

function gini() {
  const out = $("gini-out");
  out.className = "";
  try {
    const rows = JSON.parse(gini_series_json(Number($("gini-n").value)));
    const canvas = $("gini-canvas");
    const ctx = canvas.getContext("2d");
    const to = axes(ctx, canvas.width, canvas.height, 30, [rows[0].n, rows[rows.length - 1].n], [-0.5, 1]);
    line(ctx, rows.map((r) => to(r.n, r.gini_exact.value)), "#4e79a7");
    line(ctx, rows.map((r) => to(r.n, r.gini_asymptotic.value)), "#e15759");
    line(ctx, rows.map((r) => to(r.n, r.gini_limit.value)), "#59a14f");
    const last = rows[rows.length - 1];
    out.innerHTML = `<span style="color:#4e79a7">exact</span>, <span style="color:#e15759">2^(1-n)+1-3/n</span>, ` +
      `<span style="color:#59a14f">1-3/n</span>. At n = ${last.n}: G = ${last.gini_exact.text}, PoA = ${last.poa.value.toFixed(3)}`;
  } catch (e) {
    fail(out, e);
  }
}

await init();
$("sim-go").onclick = simulate;
$("curve-go").onclick = curve;
$("gini-go").onclick = gini;
simulate();
curve();
gini();
