import init, { matchText, trend, compare, defaultDictionary } from "./pkg/jobgap_web.js";

const $ = (id) => document.getElementById(id);

function text(tag, content, className) {
  const el = document.createElement(tag);
  el.textContent = content;
  if (className) el.className = className;
  return el;
}

function fail(out, err) {
  out.replaceChildren(text("p", String(err.message ?? err), "error"));
}

function numbers(s) {
  return Uint32Array.from(
    s.split(/[\s,;]+/).filter(Boolean).map((x) => {
      const n = Number(x);
      if (!Number.isInteger(n) || n < 0) throw new Error(`not a count: ${x}`);
      return n;
    }),
  );
}

function table(headers, rows) {
  const t = document.createElement("table");
  const head = t.createTHead().insertRow();
  headers.forEach((h) => head.appendChild(text("th", h)));
  const body = t.createTBody();
  rows.forEach((r) => {
    const tr = body.insertRow();
    r.forEach((c) => tr.appendChild(text("td", c)));
  });
  return t;
}

// the SVG comes from our own renderer, which escapes all text
function svg(markup) {
  const div = document.createElement("div");
  div.className = "chart";
  div.innerHTML = markup;
  return div;
}

function dictionary() {
  const toml = $("dictionary").value;
  return toml === defaultDictionary() ? "" : toml;
}

function runMatch() {
  const out = $("match-out");
  try {
    const r = JSON.parse(matchText($("match-text").value, dictionary()));
    const chips = document.createElement("p");
    r.skills.forEach((s) => chips.appendChild(text("span", s, "chip")));
    if (r.skills.length === 0) chips.textContent = "No skills found.";
    out.replaceChildren(chips, text("p", `${r.skills.length} of ${r.dictionary_skills} dictionary skills`, "hint"));
  } catch (e) {
    fail(out, e);
  }
}

function runTrend() {
  const out = $("trend-out");
  try {
    const r = JSON.parse(
      trend(
        $("trend-skill").value,
        $("trend-first").value,
        numbers($("trend-counts").value),
        numbers($("trend-totals").value),
        Number($("trend-eps").value),
      ),
    );
    const verdict = { above_market: "growing faster than the market", below_market: "falling behind the market", with_market: "moving with the market" };
    out.replaceChildren(
      text("p", `slope ${r.slope.toFixed(3)} pp/year, intercept ${r.intercept.toFixed(3)} %, ${r.n} half-years — ${verdict[r.class]}`),
      svg(r.svg),
    );
  } catch (e) {
    fail(out, e);
  }
}

function runCompare() {
  const out = $("compare-out");
  try {
    const r = JSON.parse(compare($("compare-edu").value, $("compare-job").value, dictionary()));
    const rows = r.gaps.map((g) => [g.skill, g.edu_pct.toFixed(1), g.job_pct.toFixed(1), g.gap.toFixed(1)]);
    out.replaceChildren(
      text("p", `${r.syllabi} syllabi, ${r.job_posts} job posts`, "hint"),
      table(["Skill", "Syllabi %", "Job posts %", "Gap (pp)"], rows),
      svg(r.svg),
    );
  } catch (e) {
    fail(out, e);
  }
}

await init();
$("dictionary").value = defaultDictionary();
$("dictionary-reset").addEventListener("click", () => ($("dictionary").value = defaultDictionary()));
$("match-run").addEventListener("click", runMatch);
$("trend-run").addEventListener("click", runTrend);
$("compare-run").addEventListener("click", runCompare);
runMatch();
runTrend();
runCompare();
