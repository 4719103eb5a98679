/**
 * Browser entry point: wires the workbench and the query browser to
 * the DOM. Everything stateful lives in the controllers.
 */

import { ApiClient, ApiError, DocumentPayload } from './api.js'
import { renderCommit, renderGroups, renderQuery, renderThesaurus, escapeHtml } from './render.js'
import { PendingGroup, SessionController } from './session.js'
import { QueryController } from './query.js'

const api = new ApiClient('')
const session = new SessionController(api)
const query = new QueryController(api)

const $ = (id: string) => document.getElementById(id)!

const docRows = $('doc-rows')
const addDocBtn = $('add-doc') as HTMLButtonElement
const startBtn = $('start-session') as HTMLButtonElement
const sessionStatus = $('session-status')
const groupsBox = $('groups')
const commitBtn = $('commit') as HTMLButtonElement
const commitBox = $('commit-report')
const thesaurusBox = $('thesaurus-view')
const refreshThesaurusBtn = $('refresh-thesaurus') as HTMLButtonElement
const thesaurusLang = $('thesaurus-lang') as HTMLInputElement

const queryLang = $('query-lang') as HTMLInputElement
const queryTerms = $('query-terms') as HTMLInputElement
const searchBtn = $('search') as HTMLButtonElement
const queryStatus = $('query-status')
const resultsBox = $('results')

let currentGroups: PendingGroup[] = []

function note(el: HTMLElement, text: string, isError = false) {
  el.textContent = text
  el.classList.toggle('error', isError)
}

function describe(err: unknown): string {
  if (err instanceof ApiError) return `${err.code}: ${err.message}`
  return err instanceof Error ? err.message : String(err)
}

// --- tabs -------------------------------------------------------------

for (const button of document.querySelectorAll<HTMLButtonElement>('nav button')) {
  button.addEventListener('click', () => {
    for (const other of document.querySelectorAll('nav button')) {
      other.classList.toggle('active', other === button)
    }
    for (const panel of document.querySelectorAll<HTMLElement>('main > section')) {
      panel.hidden = panel.id !== button.dataset.panel
    }
  })
}

// --- indexing workbench -------------------------------------------------

function addDocRow() {
  const row = document.createElement('div')
  row.className = 'doc-row'
  row.innerHTML =
    '<input class="doc-id" placeholder="id" size="3">' +
    '<input class="doc-lang" value="en" size="3">' +
    '<input class="doc-title" placeholder="title" size="24">' +
    '<textarea class="doc-text" rows="3" placeholder="document text"></textarea>' +
    '<button class="doc-remove">&times;</button>'
  row.querySelector('.doc-remove')!.addEventListener('click', () => row.remove())
  docRows.appendChild(row)
}

function collectDocuments(): DocumentPayload[] {
  const docs: DocumentPayload[] = []
  for (const row of docRows.querySelectorAll<HTMLElement>('.doc-row')) {
    const text = (row.querySelector('.doc-text') as HTMLTextAreaElement).value
    if (!text.trim()) continue
    const idRaw = (row.querySelector('.doc-id') as HTMLInputElement).value.trim()
    const title = (row.querySelector('.doc-title') as HTMLInputElement).value.trim()
    const doc: DocumentPayload = {
      language: (row.querySelector('.doc-lang') as HTMLInputElement).value.trim(),
      text,
    }
    if (idRaw) doc.id = Number(idRaw)
    if (title) doc.title = title
    docs.push(doc)
  }
  return docs
}

function refreshWorkbench() {
  currentGroups = session.groups()
  groupsBox.innerHTML = renderGroups(currentGroups)
  const info = session.info
  if (info) {
    note(
      sessionStatus,
      `session ${info.id.slice(0, 8)}: ${info.phase}, ` +
        `${info.pending} pending / ${info.items} items`,
    )
  }
  commitBtn.disabled = !info || info.phase !== 'awaiting-resolutions'
}

addDocBtn.addEventListener('click', addDocRow)
addDocRow()

startBtn.addEventListener('click', async () => {
  const docs = collectDocuments()
  if (docs.length === 0) {
    note(sessionStatus, 'add at least one non-empty document', true)
    return
  }
  try {
    commitBox.innerHTML = ''
    await session.open(docs)
    refreshWorkbench()
  } catch (err) {
    note(sessionStatus, describe(err), true)
  }
})

groupsBox.addEventListener('click', async (event) => {
  const target = event.target as HTMLElement
  const resolveIdx = target.dataset.resolve ?? target.dataset.discard
  if (resolveIdx === undefined) return
  const group = currentGroups[Number(resolveIdx)]
  if (!group) return
  const applyAll = (groupsBox.querySelector(`[data-all="${resolveIdx}"]`) as HTMLInputElement)?.checked ?? true
  try {
    if (target.dataset.discard !== undefined) {
      await session.resolveGroup(group, { discard: true }, applyAll)
    } else {
      const picker = groupsBox.querySelector(`[data-group="${resolveIdx}"]`) as
        | HTMLSelectElement
        | HTMLInputElement
      const value = picker.value
      if (value.startsWith('context:')) {
        await session.resolveGroup(group, { context: value.slice('context:'.length) }, applyAll)
      } else if (value.trim()) {
        await session.resolveGroup(group, { concept: value.trim() }, applyAll)
      } else {
        note(sessionStatus, 'pick a candidate or type a concept id', true)
        return
      }
    }
    refreshWorkbench()
  } catch (err) {
    note(sessionStatus, describe(err), true)
  }
})

commitBtn.addEventListener('click', async () => {
  try {
    const report = await session.commit()
    refreshWorkbench()
    commitBox.innerHTML = renderCommit(report)
    await loadThesaurus()
  } catch (err) {
    note(sessionStatus, describe(err), true)
  }
})

async function loadThesaurus() {
  try {
    const { view } = await api.thesaurus(thesaurusLang.value.trim() || 'en')
    thesaurusBox.innerHTML = renderThesaurus(view)
  } catch (err) {
    thesaurusBox.innerHTML = `<p class="error">${escapeHtml(describe(err))}</p>`
  }
}

refreshThesaurusBtn.addEventListener('click', loadThesaurus)

// --- query browser ------------------------------------------------------

async function runSearch(language: string, terms: string | string[]) {
  try {
    const result = await query.search(language, terms)
    queryTerms.value = query.terms.join(', ')
    resultsBox.innerHTML = renderQuery(result)
    note(queryStatus, `${result.documents.length} document(s)`)
  } catch (err) {
    resultsBox.innerHTML = ''
    note(queryStatus, describe(err), true)
  }
}

searchBtn.addEventListener('click', () => {
  void runSearch(queryLang.value.trim(), queryTerms.value)
})
queryTerms.addEventListener('keydown', (event) => {
  if (event.key === 'Enter') void runSearch(queryLang.value.trim(), queryTerms.value)
})

resultsBox.addEventListener('click', async (event) => {
  const target = event.target as HTMLElement
  const concept = target.dataset.narrow
  if (!concept) return
  // narrow by the concept's display form so it normalizes like typed input
  try {
    const result = await query.narrow(query.label(concept))
    queryTerms.value = query.terms.join(', ')
    resultsBox.innerHTML = renderQuery(result)
    note(queryStatus, `${result.documents.length} document(s)`)
  } catch (err) {
    note(queryStatus, describe(err), true)
  }
})

void loadThesaurus()
