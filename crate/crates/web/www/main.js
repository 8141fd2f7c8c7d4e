import init, { demoConfig, generate, sampleGeneratrix } from "./pkg/bour_web.js";

const $ = (id) => document.getElementById(id);
let result = null;
let yaw = 0.6, pitch = 0.4;

function loadDemo() {
  $("config").value = demoConfig($("demo").value);
}

function runGenerate() {
  const status = $("status");
  status.className = "";
  try {
    result = JSON.parse(generate($("config").value));
  } catch (e) {
    result = null;
    status.className = "err";
    status.textContent = e.message ?? String(e);
    draw();
    return;
  }
  const sel = $("member");
  sel.innerHTML = "";
  result.members.forEach((mem, k) => sel.add(new Option(String(mem.m), k)));
  const r = result.report;
  const lines = [`${r.space}, ${r.frame}: ${r.pass ? "pass" : "FAIL"}`];
  for (const m of r.members) {
    const iso = m.isometry;
    const d = m.cross_check?.deviations;
    const cross = d ? `, closed form ${Math.max(d.rho, d.angle, d.shift).toExponential(2)}` : "";
    lines.push(`m = ${m.m}: ${m.pass ? "pass" : "FAIL"}  max|E-1| ${iso.max_e_dev.toExponential(2)}  max|F| ${iso.max_f.toExponential(2)}  max|G-U^2| ${iso.max_g_dev.toExponential(2)}${cross}`);
  }
  lines.push(`orthogonality: max pairing ${r.orthogonality.max_pairing.toExponential(2)}`);
  status.textContent = lines.join("\n");
  draw();
}

function draw() {
  const c = $("view"), ctx = c.getContext("2d");
  ctx.clearRect(0, 0, c.width, c.height);
  if (!result || !result.members.length) return;
  const mem = result.members[Number($("member").value) || 0];
  const [cy, sy, cp, sp] = [Math.cos(yaw), Math.sin(yaw), Math.cos(pitch), Math.sin(pitch)];
  const proj = mem.vertices.map(([x, y, z]) => {
    const u = cy * x - sy * y, w = sy * x + cy * y;
    return [u, cp * z - sp * w];
  });
  let lo = [Infinity, Infinity], hi = [-Infinity, -Infinity];
  for (const p of proj) for (const k of [0, 1]) { lo[k] = Math.min(lo[k], p[k]); hi[k] = Math.max(hi[k], p[k]); }
  const scale = 0.9 * Math.min(c.width / (hi[0] - lo[0] || 1), c.height / (hi[1] - lo[1] || 1));
  const px = ([u, v]) => [c.width / 2 + scale * (u - (lo[0] + hi[0]) / 2), c.height / 2 - scale * (v - (lo[1] + hi[1]) / 2)];
  ctx.strokeStyle = "rgba(30, 60, 140, 0.35)";
  ctx.beginPath();
  for (const [a, b, d] of mem.faces) {
    const [pa, pb, pd] = [px(proj[a]), px(proj[b]), px(proj[d])];
    ctx.moveTo(...pa); ctx.lineTo(...pb); ctx.lineTo(...pd); ctx.closePath();
  }
  ctx.stroke();
}

function plotGeneratrix() {
  const c = $("plot"), ctx = c.getContext("2d"), msg = $("plotmsg");
  ctx.clearRect(0, 0, c.width, c.height);
  let data;
  try {
    data = JSON.parse(sampleGeneratrix($("expr").value, Number($("lo").value), Number($("hi").value), 200));
  } catch (e) {
    msg.className = "err";
    msg.textContent = e.message ?? String(e);
    return;
  }
  msg.className = "";
  msg.textContent = "U solid, U' dashed";
  const ys = [...data.u, ...data.du].filter(Number.isFinite);
  const [ymin, ymax] = [Math.min(...ys, 0), Math.max(...ys, 0)];
  const x = (s) => 8 + (c.width - 16) * (s - data.s[0]) / (data.s[data.s.length - 1] - data.s[0]);
  const y = (v) => c.height - 8 - (c.height - 16) * (v - ymin) / (ymax - ymin || 1);
  ctx.strokeStyle = "#aaa";
  ctx.beginPath(); ctx.moveTo(0, y(0)); ctx.lineTo(c.width, y(0)); ctx.stroke();
  for (const [key, dash] of [["u", []], ["du", [4, 3]]]) {
    ctx.setLineDash(dash);
    ctx.strokeStyle = "#222";
    ctx.beginPath();
    data[key].forEach((v, k) => Number.isFinite(v) && ctx.lineTo(x(data.s[k]), y(v)));
    ctx.stroke();
  }
  ctx.setLineDash([]);
}

await init();
$("demo").addEventListener("change", loadDemo);
$("generate").addEventListener("click", runGenerate);
$("member").addEventListener("change", draw);
for (const id of ["expr", "lo", "hi"]) $(id).addEventListener("input", plotGeneratrix);
let drag = null;
$("view").addEventListener("pointerdown", (e) => (drag = [e.clientX, e.clientY]));
window.addEventListener("pointerup", () => (drag = null));
window.addEventListener("pointermove", (e) => {
  if (!drag) return;
  yaw += (e.clientX - drag[0]) * 0.01;
  pitch += (e.clientY - drag[1]) * 0.01;
  drag = [e.clientX, e.clientY];
  draw();
});
loadDemo();
plotGeneratrix();
