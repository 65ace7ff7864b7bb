import init, { analyze_pajek, mutual_ties, audit } from "./pkg/classnet_wasm.js";

const SAMPLE = `*Vertices 6
1 "Barron"
2 "Gay"
3 "Hall"
4 "Lane"
5 "Moss"
6 "Pike"
*Arcs
1 2 4
2 1 5
1 3 2
3 1 5
3 4 4
4 3 4
4 5 3
5 4 5
5 6 5
6 5 4
2 6 1
6 2 3
`;

const $ = (id) => document.getElementById(id);

function fmt(x) {
  return typeof x === "number" ? (Number.isInteger(x) ? String(x) : x.toFixed(3)) : "-";
}

function fail(el, err) {
  el.innerHTML = "";
  const p = document.createElement("p");
  p.className = "error";
  p.textContent = String(err.message ?? err);
  el.append(p);
}

function draw(svg, graph, groups) {
  const n = graph.nodes.length;
  const size = Number(svg.getAttribute("width"));
  const r = size / 2 - 40;
  const pos = graph.nodes.map((_, i) => [
    size / 2 + r * Math.cos((2 * Math.PI * i) / n),
    size / 2 + r * Math.sin((2 * Math.PI * i) / n),
  ]);
  const colour = new Map();
  groups.forEach((g, k) => g.members.forEach((m) => colour.set(m, `hsl(${(k * 67) % 360} 60% 55%)`)));
  const parts = graph.ties.map((t) => {
    const [a, b] = [pos[t.src], pos[t.dst]];
    return `<line x1="${a[0]}" y1="${a[1]}" x2="${b[0]}" y2="${b[1]}" stroke="#999"/>`;
  });
  graph.nodes.forEach((node, i) => {
    const [x, y] = pos[i];
    parts.push(`<circle cx="${x}" cy="${y}" r="10" fill="${colour.get(i) ?? "#ccc"}"/>`);
    parts.push(`<text x="${x + 12}" y="${y - 12}" font-size="12"></text>`);
  });
  svg.innerHTML = parts.join("");
  svg.querySelectorAll("text").forEach((t, i) => (t.textContent = graph.nodes[i].label));
}

function showAnalysis() {
  try {
    const { graph, communities } = JSON.parse(analyze_pajek($("pajek").value));
    const a = graph.annotations;
    $("summary").textContent =
      `${graph.nodes.length} nodes, ${graph.ties.length} ties, density ${fmt(a.density)}, ` +
      `diameter ${fmt(a.diameter)}, ${communities.communities.length} communities (modularity ${fmt(communities.modularity)})`;
    draw($("plot"), graph, communities.communities);
    const cols = ["in_degree", "out_degree", "reach", "closeness_out", "closeness_in", "betweenness"];
    const rows = graph.nodes.map((node) => {
      const tr = document.createElement("tr");
      for (const v of [node.label, ...cols.map((c) => fmt(node.annotations?.[c]))]) {
        const td = document.createElement("td");
        td.textContent = v;
        tr.append(td);
      }
      return tr;
    });
    const head = document.createElement("tr");
    for (const c of ["label", ...cols]) {
      const th = document.createElement("th");
      th.textContent = c;
      head.append(th);
    }
    $("nodes").replaceChildren(head, ...rows);
  } catch (e) {
    fail($("summary"), e);
  }
  showMutual();
}

function showMutual() {
  const w = Number($("threshold").value);
  $("threshold-value").textContent = w;
  try {
    const { graph } = JSON.parse(mutual_ties($("pajek").value, w));
    const pairs = graph.ties.map((t) => `${graph.nodes[t.src].label} and ${graph.nodes[t.dst].label}`);
    $("mutual").textContent = `${pairs.length} mutual ties, density ${fmt(graph.annotations.density)}: ${pairs.join("; ") || "none"}`;
  } catch (e) {
    fail($("mutual"), e);
  }
}

function showAudit() {
  try {
    const items = Int32Array.from($("audit-items").value.split(",").map((s) => Number(s.trim())));
    const r = JSON.parse(audit(items));
    $("audit-result").textContent = `Score ${r.score}, zone ${r.zone}: ${r.intervention}`;
  } catch (e) {
    fail($("audit-result"), e);
  }
}

await init();
$("pajek").value = SAMPLE;
$("analyze").addEventListener("click", showAnalysis);
$("threshold").addEventListener("input", showMutual);
$("audit").addEventListener("click", showAudit);
showAnalysis();
showAudit();
