import init, { topology, partition_profile, sweep_radius } from "./pkg/helpercache_web.js";

const $ = (id) => document.getElementById(id);
const palette = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"];
const color = (p) => palette[p % palette.length];

function params() {
  const f = new FormData($("params"));
  return {
    helpers: Number(f.get("helpers")),
    profiles: Number(f.get("profiles")),
    radius: Number(f.get("radius")),
    userRadius: Number(f.get("userRadius")),
    density: Number(f.get("density")),
    seed: Number(f.get("seed")),
  };
}

let net = null;
let highlight = null;

function drawMap() {
  const c = $("map");
  const ctx = c.getContext("2d");
  ctx.clearRect(0, 0, c.width, c.height);
  if (!net) return;
  const extent = Math.max(net.user_radius, ...net.helpers.map(([x, y]) => Math.hypot(x, y) + net.radius)) * 1.05;
  const s = c.width / (2 * extent);
  const px = ([x, y]) => [c.width / 2 + x * s, c.height / 2 - y * s];

  ctx.strokeStyle = "#999";
  ctx.setLineDash([4, 4]);
  ctx.beginPath();
  ctx.arc(c.width / 2, c.height / 2, net.user_radius * s, 0, 2 * Math.PI);
  ctx.stroke();
  ctx.setLineDash([]);

  net.helpers.forEach((h, i) => {
    const [x, y] = px(h);
    ctx.fillStyle = "rgba(0,0,0,0.04)";
    ctx.beginPath();
    ctx.arc(x, y, net.radius * s, 0, 2 * Math.PI);
    ctx.fill();
    ctx.fillStyle = "#000";
    ctx.fillRect(x - 5, y - 5, 10, 10);
    ctx.fillText(`e${i + 1}`, x + 7, y - 7);
  });

  ctx.fillStyle = "#ccc";
  net.unreachable.forEach((u) => {
    const [x, y] = px(u);
    ctx.fillRect(x - 2, y - 2, 4, 4);
  });

  net.users.forEach((u, k) => {
    const [x, y] = px([u.x, u.y]);
    const dim = highlight && !highlight.members.has(k);
    ctx.globalAlpha = dim ? 0.15 : 1;
    if (highlight && highlight.helperOf.has(k)) {
      const [hx, hy] = px(net.helpers[highlight.helperOf.get(k)]);
      ctx.strokeStyle = color(u.profile);
      ctx.beginPath();
      ctx.moveTo(x, y);
      ctx.lineTo(hx, hy);
      ctx.stroke();
    }
    ctx.fillStyle = color(u.profile);
    ctx.beginPath();
    ctx.arc(x, y, 4, 0, 2 * Math.PI);
    ctx.fill();
  });
  ctx.globalAlpha = 1;
}

function draw() {
  const p = params();
  try {
    net = JSON.parse(topology(p.helpers, p.profiles, p.radius, p.userRadius, p.density, p.seed));
  } catch (e) {
    $("summary").textContent = `error: ${e}`;
    net = null;
    drawMap();
    return;
  }
  highlight = null;
  $("summary").textContent =
    `${net.users.length} reachable users, ${net.unreachable.length} out of range. ` +
    `Users per profile: ${net.profile_counts.join(", ")}`;
  const sel = $("profile");
  sel.innerHTML = net.profile_counts
    .map((n, i) => `<option value="${i}">${i + 1} (${n} users)</option>`).join("");
  $("partitions").innerHTML = "";
  drawMap();
}

function table(title, parts) {
  const rows = parts.map((slots, g) =>
    `<tr><th>${g + 1}</th>${slots.map((u) => u === null
      ? '<td class="idle">0</td>' : `<td>${u + 1}</td>`).join("")}</tr>`).join("");
  const head = parts.length ? parts[0].map((_, i) => `<th>e${i + 1}</th>`).join("") : "";
  return `<h3>${title}: ${parts.length} partitions</h3><table><tr><th></th>${head}</tr>${rows}</table>`;
}

function partition() {
  if (!net) return;
  const p = params();
  const profile = Number($("profile").value);
  const r = JSON.parse(partition_profile(p.helpers, p.profiles, p.radius, p.userRadius, p.density, p.seed, profile));
  $("partitions").innerHTML =
    `<p>lower bound ${r.lower_bound}, ${r.bb_states} search states</p>` +
    table("branch and bound", r.bb) + table("greedy", r.greedy);
  const helperOf = new Map();
  r.bb.forEach((slots) => slots.forEach((u, i) => { if (u !== null) helperOf.set(u, i); }));
  highlight = { members: new Set(r.users), helperOf };
  drawMap();
}

function chart(rows) {
  const c = $("chart");
  const ctx = c.getContext("2d");
  ctx.clearRect(0, 0, c.width, c.height);
  if (!rows.length) return;
  const pad = 40;
  const xs = rows.map((r) => r.r);
  const x0 = Math.min(...xs), x1 = Math.max(...xs) || 1;
  const y1 = Math.max(...rows.map((r) => r.bb + r.bb_std)) * 1.1 || 1;
  const X = (x) => pad + (x1 === x0 ? 0.5 : (x - x0) / (x1 - x0)) * (c.width - 2 * pad);
  const Y = (y) => c.height - pad - (y / y1) * (c.height - 2 * pad);
  ctx.strokeStyle = "#000";
  ctx.beginPath();
  ctx.moveTo(pad, pad / 2);
  ctx.lineTo(pad, c.height - pad);
  ctx.lineTo(c.width - pad / 2, c.height - pad);
  ctx.stroke();
  ctx.fillStyle = "#000";
  rows.forEach((r) => ctx.fillText(r.r.toString(), X(r.r) - 8, c.height - pad + 15));
  for (let y = 0; y <= y1; y += 1) ctx.fillText(y.toString(), pad - 15, Y(y) + 4);
  [["bb", "#1f77b4"], ["greedy", "#ff7f0e"]].forEach(([key, col], i) => {
    ctx.strokeStyle = col;
    ctx.fillStyle = col;
    ctx.beginPath();
    rows.forEach((r, j) => (j ? ctx.lineTo : ctx.moveTo).call(ctx, X(r.r), Y(r[key])));
    ctx.stroke();
    rows.forEach((r) => {
      ctx.beginPath();
      ctx.arc(X(r.r), Y(r[key]), 3, 0, 2 * Math.PI);
      ctx.fill();
    });
    ctx.fillText(key === "bb" ? "branch and bound" : "greedy", c.width - 150, pad + 15 * i);
  });
}

function sweep() {
  const p = params();
  $("sweepOut").textContent = "running...";
  setTimeout(() => {
    try {
      const rows = JSON.parse(sweep_radius(p.helpers, p.profiles, $("radii").value,
        p.userRadius, p.density, Number($("trials").value), p.seed));
      chart(rows);
      $("sweepOut").textContent = rows
        .map((r) => `r=${r.r}  bb ${r.bb.toFixed(3)} (sd ${r.bb_std.toFixed(3)})  greedy ${r.greedy.toFixed(3)}  mean K ${r.mean_k.toFixed(1)}`)
        .join("\n");
    } catch (e) {
      $("sweepOut").textContent = `error: ${e}`;
    }
  }, 0);
}

await init();
$("draw").addEventListener("click", draw);
$("partition").addEventListener("click", partition);
$("sweep").addEventListener("click", sweep);
draw();
