// Build with: wasm-pack build crates/wasm --target web --out-dir www/pkg
import init, { enumerate, components, d4_table } from "./pkg/finegrad_wasm.js";

const $ = (id) => document.getElementById(id);
const fmtType = (t) => "(" + t.join(",") + ")";

function status(text, isError) {
  $("status").textContent = text;
  $("status").className = isError ? "error" : "";
}

function fill(table, head, rows, onPick) {
  table.replaceChildren();
  const thead = table.createTHead().insertRow();
  for (const h of head) thead.insertCell().outerHTML = `<th>${h}</th>`;
  const body = table.createTBody();
  rows.forEach((cells, i) => {
    const tr = body.insertRow();
    for (const c of cells) tr.insertCell().textContent = c;
    if (onPick) tr.addEventListener("click", () => onPick(i + 1));
  });
}

// Blocking calls: give the status line a frame to paint first.
function later(f) {
  return new Promise((resolve) => requestAnimationFrame(() => setTimeout(() => resolve(f()), 0)));
}

async function showComponents(family, n, index) {
  try {
    const v = JSON.parse(await later(() => components(family, n, index)));
    $("detail-title").hidden = false;
    $("detail-title").textContent = `Components of class ${index}: ${v.report.group}, type ${fmtType(v.report.type)}`;
    fill($("detail"), ["degree", "dim"], v.components.map((c) => [c.degree, c.dim]));
  } catch (e) {
    status(e.message ?? String(e), true);
  }
}

async function runEnumerate(ev) {
  ev.preventDefault();
  const family = $("family").value;
  const n = Number($("n").value);
  status(`enumerating ${family}${n}...`);
  $("detail").replaceChildren();
  $("detail-title").hidden = true;
  try {
    const t0 = performance.now();
    const v = JSON.parse(await later(() => enumerate(family, n)));
    status(`${v.count} fine gradings (${v.count_tag}) in ${Math.round(performance.now() - t0)} ms; click a row for its components`);
    fill(
      $("classes"),
      ["#", "D", "tuple", "group", "type"],
      v.reports.map((r, i) => [i + 1, r.division, r.tuple, r.group, fmtType(r.type)]),
      (i) => showComponents(family, n, i),
    );
  } catch (e) {
    status(e.message ?? String(e), true);
  }
}

async function runD4() {
  status("building the so8 table...");
  $("detail").replaceChildren();
  $("detail-title").hidden = true;
  try {
    const v = JSON.parse(await later(() => d4_table()));
    status(`${v.count} fine gradings of so8`);
    fill($("classes"), ["#", "group", "type", "provenance"], v.rows.map((r) => [r.index, r.group, fmtType(r.type), r.source]));
  } catch (e) {
    status(e.message ?? String(e), true);
  }
}

await init();
$("enum").addEventListener("submit", runEnumerate);
$("d4").addEventListener("click", runD4);
status("ready");
