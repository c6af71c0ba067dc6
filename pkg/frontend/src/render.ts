// HTML fragment builders for the panels around the diagram. Pure
// functions over service data; numbers pass through String() untouched
// so what the user reads is exactly what the service said.

import type { Distribution, SessionView, Suggestion } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderChips(view: SessionView): string {
  const chips = view.ingredients
    .map((name) => {
      const safe = escapeHtml(name);
      return `<button class="chip" type="button" data-ingredient="${safe}">${safe}</button>`;
    })
    .join("");
  const dropped =
    view.dropped_oov.length === 0
      ? ""
      : `<p class="dropped">not in vocabulary, ignored: ${view.dropped_oov
          .map(escapeHtml)
          .join(", ")}</p>`;
  return `<div class="chips">${chips}</div>${dropped}`;
}

export function renderTargetOptions(countries: string[], selected?: string): string {
  return countries
    .map((name) => {
      const safe = escapeHtml(name);
      const sel = name === selected ? " selected" : "";
      return `<option value="${safe}"${sel}>${safe}</option>`;
    })
    .join("");
}

export function renderSuggestions(
  ingredient: string,
  suggestions: Suggestion[],
  invalid?: ReadonlySet<string>,
): string {
  if (suggestions.length === 0) {
    return `<p class="empty">no suggestions for ${escapeHtml(ingredient)}</p>`;
  }
  const rows = suggestions
    .map((s) => {
      const safe = escapeHtml(s.candidate);
      const bad = invalid?.has(s.candidate) ?? false;
      const cls = bad ? ` class="invalid"` : "";
      const button = bad
        ? `<span class="rejected">rejected</span>`
        : `<button type="button" class="pick" data-candidate="${safe}">swap in</button>`;
      return (
        `<tr${cls} data-candidate="${safe}">` +
        `<td>${safe}</td>` +
        `<td class="num">${String(s.analogy_similarity)}</td>` +
        `<td class="num">${String(s.prob_target_after)}</td>` +
        `<td class="num">${String(s.prob_source_after)}</td>` +
        `<td>${button}</td></tr>`
      );
    })
    .join("");
  return (
    `<table class="suggestions" data-ingredient="${escapeHtml(ingredient)}">` +
    `<thead><tr><th>candidate</th><th>similarity</th>` +
    `<th>p(target) after</th><th>p(source) after</th><th></th></tr></thead>` +
    `<tbody>${rows}</tbody></table>`
  );
}

export function renderHistory(view: SessionView): string {
  if (view.history.length === 0) {
    return `<p class="empty">no substitutions yet</p>`;
  }
  const items = view.history
    .map((entry, i) => {
      const p = entry.distribution[view.target];
      return (
        `<li data-step="${i + 1}">` +
        `<span class="swap">${escapeHtml(entry.replaced)} → ${escapeHtml(entry.replacement)}</span>` +
        `<span class="num" data-prob="${String(p)}">p(${escapeHtml(view.target)}) ${String(p)}</span>` +
        `</li>`
      );
    })
    .join("");
  return `<ol class="history">${items}</ol>`;
}

export function renderDistributionTable(distribution: Distribution): string {
  const rows = Object.entries(distribution)
    .sort((a, b) => b[1] - a[1])
    .map(
      ([country, p]) =>
        `<tr data-country="${escapeHtml(country)}"><td>${escapeHtml(country)}</td>` +
        `<td class="num" data-prob="${String(p)}">${String(p)}</td></tr>`,
    )
    .join("");
  return (
    `<table class="distribution"><thead><tr><th>cuisine</th><th>probability</th></tr></thead>` +
    `<tbody>${rows}</tbody></table>`
  );
}

export function renderStatus(view: SessionView): string {
  const ps = view.distribution[view.source];
  const pt = view.distribution[view.target];
  return (
    `<span class="from">${escapeHtml(view.source)} <b data-prob="${String(ps)}">${String(ps)}</b></span>` +
    ` → ` +
    `<span class="to">${escapeHtml(view.target)} <b data-prob="${String(pt)}">${String(pt)}</b></span>`
  );
}
