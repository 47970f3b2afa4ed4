import init, { sample_thread, profile_article, filter_thread, sweep_grid } from "./pkg/topicsift_web.js";

const $ = (id) => document.getElementById(id);

function inputs() {
  return {
    article: $("article").value,
    comments: $("comments").value,
    thetaMin: Number($("theta-min").value),
    thetaBest: Number($("theta-best").value),
    grow: $("grow").checked,
    minLen: Number($("min-len").value),
  };
}

function guarded(fn) {
  return () => {
    $("error").textContent = "";
    try {
      fn();
    } catch (e) {
      $("error").textContent = e.message ?? String(e);
    }
  };
}

function cell(row, text, cls) {
  const td = row.insertCell();
  td.textContent = text;
  if (cls) td.className = cls;
}

function showProfile() {
  const p = inputs();
  const view = JSON.parse(profile_article(p.article, p.minLen));
  const acr = new Set(view.acronyms);
  $("profile-summary").textContent =
    `${view.vocabulary.length} words (${acr.size} acronyms), ` +
    `${view.sentence_counts.length} sentences, benchmark score ${view.article_score.toFixed(4)}`;
  const box = $("vocab");
  box.replaceChildren();
  for (const w of view.vocabulary) {
    const s = document.createElement("span");
    s.textContent = w;
    if (acr.has(w)) s.className = "acr";
    box.append(s);
  }
  $("profile-out").hidden = false;
}

function drawChart(view) {
  const canvas = $("chart");
  const ctx = canvas.getContext("2d");
  const { width, height } = canvas;
  const pad = 30;
  ctx.clearRect(0, 0, width, height);

  const scores = view.comments.map((c) => c.score);
  const top = Math.max(view.growth_cutoff, ...scores) * 1.1 || 1;
  const y = (v) => height - pad - (v / top) * (height - 2 * pad);
  const step = (width - 2 * pad) / Math.max(view.comments.length, 1);

  ctx.strokeStyle = "#999";
  ctx.beginPath();
  ctx.moveTo(pad, pad);
  ctx.lineTo(pad, height - pad);
  ctx.lineTo(width - pad, height - pad);
  ctx.stroke();

  const colors = { accepted: "#3a9a3a", rejected: "#c44", skipped: "#bbb" };
  view.comments.forEach((c, i) => {
    ctx.fillStyle = colors[c.verdict];
    const x = pad + i * step;
    const h = height - pad - y(c.score);
    ctx.fillRect(x + 1, y(c.score), Math.max(step - 2, 1), h);
  });

  const line = (v, color, label) => {
    ctx.strokeStyle = color;
    ctx.setLineDash([5, 4]);
    ctx.beginPath();
    ctx.moveTo(pad, y(v));
    ctx.lineTo(width - pad, y(v));
    ctx.stroke();
    ctx.setLineDash([]);
    ctx.fillStyle = color;
    ctx.fillText(`${label} ${v.toFixed(4)}`, width - pad - 150, y(v) - 4);
  };
  line(view.accept_cutoff, "#2a6", "accept");
  line(view.growth_cutoff, "#36c", "grow");
}

function showFilter() {
  const p = inputs();
  const view = JSON.parse(filter_thread(p.article, p.comments, p.thetaMin, p.thetaBest, p.grow, p.minLen));
  $("report").textContent = view.report_text;
  const body = $("verdicts").tBodies[0];
  body.replaceChildren();
  for (const c of view.comments) {
    const row = body.insertRow();
    row.className = c.verdict;
    cell(row, c.id);
    cell(row, c.score.toFixed(4));
    cell(row, c.verdict);
    cell(row, c.karma);
    cell(row, c.new_words_added);
    cell(row, c.text, "text");
  }
  $("filter-out").hidden = false;
  drawChart(view);
}

function showSweep() {
  const p = inputs();
  const view = JSON.parse(sweep_grid(p.article, p.comments, $("grid-min").value, $("grid-best").value, p.grow, p.minLen));
  const body = $("sweep").tBodies[0];
  body.replaceChildren();
  for (const r of view.rows) {
    const row = body.insertRow();
    cell(row, r.theta_min);
    cell(row, r.theta_best);
    cell(row, r.accepted);
    cell(row, r.rejected);
    cell(row, r.final_vocab_size);
    cell(row, r.success_rate == null ? "" : r.success_rate.toFixed(3));
  }
  $("sweep-note").textContent = view.omitted.length
    ? `Skipped ${view.omitted.map(([a, b]) => `(${a}, ${b})`).join(" ")}: theta_best below theta_min.`
    : "";
  $("sweep-out").hidden = false;
}

await init();
const sample = JSON.parse(sample_thread());
$("article").value = sample.article;
$("comments").value = sample.comments;
$("run-profile").onclick = guarded(showProfile);
$("run-filter").onclick = guarded(showFilter);
$("run-sweep").onclick = guarded(showSweep);
guarded(showFilter)();
