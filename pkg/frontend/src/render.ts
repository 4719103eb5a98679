/**
 * HTML renderers. Pure string builders so they stay testable without
 * a DOM; app.ts assigns the results to innerHTML.
 */

import { CommitReport, QueryResult, ThesaurusView } from './api.js'
import { PendingGroup } from './session.js'

export function escapeHtml(s: string): string {
  return s
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;')
    .replace(/'/g, '&#39;')
}

export function renderGroups(groups: PendingGroup[]): string {
  if (groups.length === 0) {
    return '<p class="empty">Nothing pending.</p>'
  }
  const blocks = groups.map((group, i) => {
    const n = group.items.length
    const badge = n === 1 ? '1 occurrence' : `${n} occurrences`
    const options = group.candidates
      .map(
        (c) =>
          `<option value="context:${escapeHtml(c.context)}">` +
          `${escapeHtml(c.representative)} (${escapeHtml(c.context)})</option>`,
      )
      .join('')
    const picker = group.candidates.length
      ? `<select data-group="${i}">${options}</select>`
      : `<input data-group="${i}" placeholder="concept id" size="14">`
    return (
      `<div class="group" data-key="${escapeHtml(group.key)}">` +
      `<span class="surface">${escapeHtml(group.label)}</span>` +
      `<span class="badge">${badge}</span>` +
      `<span class="lang">${escapeHtml(group.language)}</span>` +
      picker +
      `<label><input type="checkbox" data-all="${i}" checked> all occurrences</label>` +
      `<button data-resolve="${i}">Resolve</button>` +
      `<button data-discard="${i}">Discard</button>` +
      `</div>`
    )
  })
  return blocks.join('\n')
}

export function renderCommit(report: CommitReport): string {
  const rects = report.rectangles
    .map(
      (r) =>
        `<li><code>{${r.domain.map(escapeHtml).join(', ')}}</code>` +
        ` &times; docs ${r.documents.join(', ')}</li>`,
    )
    .join('')
  const docs = report.documents
    .map((d) => `<li>doc ${d.id}: ${d.significant.map(escapeHtml).join(', ') || '(none)'}</li>`)
    .join('')
  return (
    `<p>Committed ${report.rectangles.length} rectangle(s).</p>` +
    `<ul>${rects}</ul><h4>Significant terms</h4><ul>${docs}</ul>`
  )
}

export function renderQuery(result: QueryResult): string {
  const label = (c: string) => escapeHtml(result.labels[c] ?? c)
  const parts: string[] = []
  parts.push(
    `<p>Concepts: ${result.concepts.map((c) => `<b>${label(c)}</b>`).join(', ') || '(none)'}</p>`,
  )
  if (result.unknown.length) {
    parts.push(`<p class="warn">Unknown terms: ${result.unknown.map(escapeHtml).join(', ')}</p>`)
  }
  if (result.rectangles.length === 0) {
    parts.push('<p class="empty">No matching rectangle; broaden the query.</p>')
  } else {
    const rows = result.rectangles
      .map((hit) => {
        const feedback = hit.feedback
          .map((c) => `<button class="chip" data-narrow="${escapeHtml(c)}">${label(c)}</button>`)
          .join(' ')
        return (
          `<tr><td>${hit.node_id}</td>` +
          `<td>${hit.documents.map((d) => `<span class="doc">${d}</span>`).join(' ')}</td>` +
          `<td>${feedback || '&mdash;'}</td></tr>`
        )
      })
      .join('')
    parts.push(
      '<table><thead><tr><th>Node</th><th>Documents</th><th>Feedback</th></tr></thead>' +
        `<tbody>${rows}</tbody></table>`,
    )
  }
  parts.push(
    `<p class="doclist">Documents: ${result.documents.map((d) => `<span class="doc">${d}</span>`).join(' ') || '(none)'}</p>`,
  )
  return parts.join('\n')
}

export function renderThesaurus(view: ThesaurusView): string {
  if (view.levels.length === 0) {
    return '<p class="empty">The thesaurus is empty.</p>'
  }
  const levels = view.levels
    .map((lvl) => {
      const nodes = lvl.nodes
        .map((n) => {
          const terms = n.added_terms.map((t) => escapeHtml(t.representative)).join(', ')
          const removed = n.removed_docs.length ? ` &minus;docs ${n.removed_docs.join(', ')}` : ''
          return `<li>#${n.id} +[${terms}]${removed}</li>`
        })
        .join('')
      return `<div class="level"><h4>Level ${lvl.level}</h4><ul>${nodes}</ul></div>`
    })
    .join('')
  const docs = view.documents
    .map((d) => `<li>${d.id}: ${escapeHtml(d.title ?? '(untitled)')} [${escapeHtml(d.language)}]</li>`)
    .join('')
  return `${levels}<h4>Documents</h4><ul>${docs}</ul>`
}
