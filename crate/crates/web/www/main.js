import init, { ratio_profile, inclusion_table, certify_sweep } from "./pkg/kernel_inclusion_web.js";

const $ = (id) => document.getElementById(id);

function guarded(statusId, fn) {
  return () => {
    const status = $(statusId);
    status.className = "status";
    status.textContent = "working…";
    // let the status paint before the synchronous wasm call
    setTimeout(() => {
      const t0 = performance.now();
      try {
        fn();
        status.textContent = `${((performance.now() - t0) / 1000).toFixed(2)} s`;
      } catch (e) {
        status.className = "status error";
        status.textContent = String(e.message ?? e);
      }
    }, 10);
  };
}

function fmt(x) {
  if (x === null || x === undefined) return "";
  if (x !== 0 && (Math.abs(x) < 1e-3 || Math.abs(x) >= 1e5)) return x.toExponential(3);
  return x.toPrecision(5);
}

function renderTable() {
  const t = JSON.parse(inclusion_table(Number($("t-dim").value), $("t-params").value));
  const rows = t.families.map((r, i) => {
    const cells = t.families.map((_, j) => {
      const rel = t.relations[i][j];
      const lam = t.lambdas[i][j];
      const cls = [rel === "⊆" || rel === "=" ? "yes" : "", t.agrees[i][j] ? "" : "bad"].join(" ");
      const note = lam !== null && i !== j ? `<br><small>${t.exact[i][j] ? "λ=" : "λ≤"}${fmt(lam)}</small>` : "";
      return `<td class="${cls}">${rel}${note}</td>`;
    });
    return `<tr><th>H<sub>${r}</sub></th>${cells.join("")}</tr>`;
  });
  const head = `<tr><th></th>${t.families.map((f) => `<th>H<sub>${f}</sub></th>`).join("")}</tr>`;
  $("t-out").innerHTML = `<table class="incl">${head}${rows.join("")}</table>
    <p><small>Row ⊆ column. Outlined cells disagree with the numeric ratio engine.</small></p>`;
}

function axes(ctx, w, h, pad, xlabel, ylabel) {
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.beginPath();
  ctx.moveTo(pad, pad / 2);
  ctx.lineTo(pad, h - pad);
  ctx.lineTo(w - pad / 2, h - pad);
  ctx.stroke();
  ctx.fillStyle = "#333";
  ctx.font = "12px sans-serif";
  ctx.fillText(xlabel, w / 2, h - 8);
  ctx.save();
  ctx.translate(14, h / 2);
  ctx.rotate(-Math.PI / 2);
  ctx.fillText(ylabel, 0, 0);
  ctx.restore();
}

function renderProfile() {
  const p = JSON.parse(ratio_profile($("p-k").value, $("p-g").value, Number($("p-dim").value)));
  const c = $("p-plot");
  const ctx = c.getContext("2d");
  const pad = 50;
  axes(ctx, c.width, c.height, pad, "log10 ‖ξ‖", "log10 u/v");
  const pts = p.samples.filter(([r, q]) => r > 0 && q > 0).map(([r, q]) => [Math.log10(r), Math.log10(q)]);
  if (pts.length === 0) return;
  const xs = pts.map((v) => v[0]);
  const ys = pts.map((v) => v[1]);
  const [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  const [y0, y1] = [Math.min(...ys), Math.max(...ys) + 1e-9];
  const X = (x) => pad + ((x - x0) / (x1 - x0 || 1)) * (c.width - 1.5 * pad);
  const Y = (y) => c.height - pad - ((y - y0) / (y1 - y0 || 1)) * (c.height - 1.5 * pad);
  ctx.fillStyle = "rgba(30, 90, 180, 0.35)";
  for (const [x, y] of pts) ctx.fillRect(X(x) - 1, Y(y) - 1, 2, 2);
  ctx.fillStyle = "#333";
  ctx.fillText(`${x0.toFixed(1)}`, pad, c.height - pad + 14);
  ctx.fillText(`${x1.toFixed(1)}`, c.width - pad, c.height - pad + 14);
  ctx.fillText(`${y1.toFixed(1)}`, 4, pad / 2 + 10);
  ctx.fillText(`${y0.toFixed(1)}`, 4, c.height - pad);
  const lam = p.lambda === null ? "∞" : fmt(p.lambda);
  ctx.fillText(`H_K ${p.relation} H_G   sup ≈ ${fmt(p.sup_estimate)}   λ: ${lam}   blowup: ${p.blowup}`, pad + 10, pad / 2 + 10);
}

function renderSweep() {
  const s = JSON.parse(
    certify_sweep($("s-k").value, $("s-g").value, Number($("s-dim").value), Number($("s-lo").value), Number($("s-hi").value), 24, 1),
  );
  const c = $("s-plot");
  const ctx = c.getContext("2d");
  const pad = 50;
  axes(ctx, c.width, c.height, pad, "λ (log scale)", "PSD fraction");
  const l0 = Math.log(s.points[0].lambda);
  const l1 = Math.log(s.points[s.points.length - 1].lambda);
  const X = (l) => pad + ((Math.log(l) - l0) / (l1 - l0 || 1)) * (c.width - 1.5 * pad);
  const Y = (f) => c.height - pad - f * (c.height - 1.5 * pad);
  ctx.strokeStyle = "#1a6";
  ctx.lineWidth = 2;
  ctx.beginPath();
  s.points.forEach((p, i) => (i ? ctx.lineTo(X(p.lambda), Y(p.pass_fraction)) : ctx.moveTo(X(p.lambda), Y(p.pass_fraction))));
  ctx.stroke();
  ctx.lineWidth = 1;
  if (s.decided_lambda !== null && s.decided_lambda >= s.points[0].lambda && s.decided_lambda <= s.points[s.points.length - 1].lambda) {
    ctx.strokeStyle = "#c33";
    ctx.setLineDash([4, 4]);
    ctx.beginPath();
    ctx.moveTo(X(s.decided_lambda), pad / 2);
    ctx.lineTo(X(s.decided_lambda), c.height - pad);
    ctx.stroke();
    ctx.setLineDash([]);
    ctx.fillStyle = "#c33";
    ctx.fillText(`decided λ = ${fmt(s.decided_lambda)}`, X(s.decided_lambda) + 4, pad / 2 + 10);
  }
  ctx.fillStyle = "#333";
  ctx.fillText(fmt(s.points[0].lambda), pad, c.height - pad + 14);
  ctx.fillText(fmt(s.points[s.points.length - 1].lambda), c.width - pad, c.height - pad + 14);
  ctx.fillText("1", pad - 14, Y(1) + 4);
  ctx.fillText("0", pad - 14, Y(0) + 4);
}

await init();
$("t-run").addEventListener("click", guarded("t-status", renderTable));
$("p-run").addEventListener("click", guarded("p-status", renderProfile));
$("s-run").addEventListener("click", guarded("s-status", renderSweep));
