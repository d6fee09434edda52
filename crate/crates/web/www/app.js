import init, { staircase, lambda_sequence, kunz } from "./pkg/entrolab_web.js";

const PRESETS = {
  frob25: `[ring]
characteristic = 5
variables = ["x", "y"]
relations = []

[map]
x = "x^5"
y = "y^5"
`,
  cusp: `[ring]
characteristic = 5
variables = ["x", "y"]
relations = ["y^2 - x^3"]

[map]
x = "x^5"
y = "y^5"
`,
  power2: `[ring]
characteristic = 0
variables = ["x", "y"]
relations = []

[map]
x = "x^2"
y = "y^2"
`,
  mixed: `[ring]
characteristic = 0
variables = ["x", "y"]
relations = []

[map]
x = "y^2"
y = "x^3"
`,
  swap: `[ring]
characteristic = 0
variables = ["x", "y"]
relations = ["x*y"]

[map]
x = "y"
y = "x"
`,
};

const SVG = "http://www.w3.org/2000/svg";
const $ = (id) => document.getElementById(id);

function el(tag, attrs = {}, text) {
  const node = document.createElementNS(SVG, tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  if (text !== undefined) node.textContent = text;
  return node;
}

function showError(target, err) {
  target.replaceChildren();
  const p = document.createElement("p");
  p.className = "error";
  p.textContent = `${err.kind}: ${err.message}`;
  target.append(p);
}

function table(headers, rows) {
  const t = document.createElement("table");
  const head = t.insertRow();
  for (const h of headers) {
    const th = document.createElement("th");
    th.textContent = h;
    head.append(th);
  }
  for (const r of rows) {
    const tr = t.insertRow();
    for (const c of r) tr.insertCell().textContent = c;
  }
  return t;
}

function drawStaircase(data) {
  const out = $("staircase-out");
  out.replaceChildren();
  const info = document.createElement("p");
  info.textContent = `length(R/J) = ${data.length}`;
  out.append(info);
  if (data.variables.length !== 2) {
    out.append(table(["standard monomial"], data.standard_monomials.map((e) => [JSON.stringify(e)])));
    return;
  }
  const std = data.standard_monomials;
  // Leading monomials coming from the m^N truncation sit far outside the
  // staircase; only draw those touching it.
  const maxX = Math.max(1, ...std.map((e) => e[0])) + 2;
  const maxY = Math.max(1, ...std.map((e) => e[1])) + 2;
  const cell = Math.max(6, Math.min(28, Math.floor(320 / Math.max(maxX, maxY))));
  const pad = 24;
  const w = pad + maxX * cell + 8;
  const h = pad + maxY * cell + 8;
  const svg = el("svg", { width: w, height: h, viewBox: `0 0 ${w} ${h}` });
  const X = (i) => pad + i * cell;
  const Y = (j) => h - pad - (j + 1) * cell;
  for (const [i, j] of std) {
    svg.append(el("rect", { x: X(i), y: Y(j), width: cell, height: cell, fill: "#9ecae1", stroke: "#3182bd", "stroke-width": 0.5 }));
  }
  for (const [i, j] of data.leading_monomials) {
    if (i > maxX || j > maxY) continue;
    svg.append(el("circle", { cx: X(i) + cell / 2, cy: Y(j) + cell / 2, r: Math.max(2, cell / 4), fill: "#de2d26" }));
  }
  svg.append(el("line", { x1: pad, y1: h - pad, x2: w, y2: h - pad, stroke: "#333" }));
  svg.append(el("line", { x1: pad, y1: 0, x2: pad, y2: h - pad, stroke: "#333" }));
  svg.append(el("text", { x: w - 12, y: h - 8 }, data.variables[0]));
  svg.append(el("text", { x: 4, y: 12 }, data.variables[1]));
  out.append(svg);
}

function plotRates(result) {
  const rates = result.rates.map(([n, r]) => [n, parseFloat(r.decimal)]);
  const bounds = result.running_upper_bounds.map(([n, r]) => [n, parseFloat(r.decimal)]);
  const w = 340, h = 200, pad = 34;
  const maxN = rates.length;
  const top = Math.max(...rates.map((r) => r[1]), 0.1) * 1.1;
  const X = (n) => pad + ((n - 1) / Math.max(1, maxN - 1)) * (w - 2 * pad);
  const Y = (v) => h - pad - (v / top) * (h - 2 * pad);
  const svg = el("svg", { width: w, height: h, viewBox: `0 0 ${w} ${h}` });
  svg.append(el("line", { x1: pad, y1: h - pad, x2: w - pad, y2: h - pad, stroke: "#333" }));
  svg.append(el("line", { x1: pad, y1: pad / 2, x2: pad, y2: h - pad, stroke: "#333" }));
  for (const [n] of rates) svg.append(el("text", { x: X(n) - 3, y: h - pad + 14 }, n));
  svg.append(el("text", { x: 2, y: Y(top) + 4 }, top.toFixed(2)));
  svg.append(el("text", { x: w - pad, y: h - 6 }, "n"));
  const path = (pts, attrs) => el("polyline", { points: pts.map(([n, v]) => `${X(n)},${Y(v)}`).join(" "), fill: "none", ...attrs });
  svg.append(path(bounds, { stroke: "#31a354", "stroke-dasharray": "4 3", "stroke-width": 2 }));
  svg.append(path(rates, { stroke: "#3182bd", "stroke-width": 1.5 }));
  for (const [n, v] of rates) svg.append(el("circle", { cx: X(n), cy: Y(v), r: 3, fill: "#3182bd" }));
  return svg;
}

function badge(label) {
  const span = document.createElement("span");
  const good = ["CONSISTENT_WITH_REGULAR", "CONTRACTING", "REGULAR_UP_TO_N"];
  const bad = ["CERTIFIED_NOT_REGULAR", "NOT_REGULAR", "NOT_CONTRACTING"];
  span.className = "badge " + (good.includes(label) ? "good" : bad.includes(label) ? "bad" : "neutral");
  span.textContent = label;
  return span;
}

function runStaircase() {
  const data = JSON.parse(staircase($("toml").value, $("gens").value));
  if (data.error) return showError($("staircase-out"), data.error);
  drawStaircase(data);
}

function runLambda() {
  const out = $("lambda-out");
  const doc = JSON.parse(lambda_sequence($("toml").value, Number($("max-n").value)));
  if (doc.error) return showError(out, doc.error);
  const r = doc.result;
  out.replaceChildren(
    table(["n", "lambda(phi^n)", "log(lambda)/n"], r.rates.map(([n, rate]) => [n, rate.lambda, rate.decimal])),
    plotRates(r),
  );
  const p = document.createElement("p");
  p.textContent = `entropy <= ${r.entropy_upper_bound.expression} = ${r.entropy_upper_bound.decimal}` +
    (r.exact_if_multiplicative ? " (lambda is multiplicative on this range)" : "");
  out.append(p);
}

function runKunz() {
  const out = $("kunz-out");
  const doc = JSON.parse(kunz($("toml").value, Number($("max-n").value)));
  if (doc.error) return showError(out, doc.error);
  out.replaceChildren(...doc.labels.map(badge));
  const v = doc.result.verdict;
  const p = document.createElement("p");
  if (v.label === "CERTIFIED_NOT_REGULAR") {
    p.textContent = `lambda(phi^${v.witness}) = ${v.lambda} < ${v.lambda_one_pow} = lambda(phi)^${v.witness}, so phi is not flat and R is not regular.`;
  } else if (v.label === "CONSISTENT_WITH_REGULAR") {
    p.textContent = `lambda(phi^n) = lambda(phi)^n for n <= ${v.up_to}. This is evidence, not a proof.`;
  } else {
    p.textContent = "phi is not contracting, so lambda says nothing about regularity.";
  }
  out.append(p);
  const c = doc.result.regularity_cross_check;
  const q = document.createElement("p");
  q.textContent = c.verdict === "NOT_REGULAR"
    ? `Hilbert-Samuel: length(R/m^${c.witness}) = ${c.length}, expected ${c.expected} for a regular ring.`
    : `Hilbert-Samuel function matches a regular ring up to N = ${c.n_max}.`;
  out.append(q);
}

function loadPreset() {
  $("toml").value = PRESETS[$("preset").value];
}

await init();
$("preset").addEventListener("change", loadPreset);
$("run-staircase").addEventListener("click", runStaircase);
$("run-lambda").addEventListener("click", runLambda);
$("run-kunz").addEventListener("click", runKunz);
loadPreset();
runStaircase();
runLambda();
runKunz();
