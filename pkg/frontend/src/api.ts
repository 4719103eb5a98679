/**
 * Typed client for the recthes HTTP API.
 *
 * Every call resolves with the parsed body on 2xx and throws ApiError
 * otherwise. The raw response text is kept where the UI needs
 * byte-level fidelity (query results).
 */

export interface DocumentPayload {
  language: string
  text: string
  id?: number
  title?: string
  uri?: string
}

export interface SessionDocument {
  id: number
  language: string
  title: string | null
}

export interface SessionInfo {
  id: string
  phase: string
  documents: SessionDocument[]
  items: number
  pending: number
  resolved: number
}

export interface Candidate {
  context: string
  concept: string
  representative: string
}

export interface PendingItem {
  item_id: number
  document: number
  phrase: number
  position: number
  surface: string
  normal_form: string | null
  language: string
  candidates: Candidate[]
}

export interface AmbiguityList {
  session_id: string
  pending: PendingItem[]
  resolved: number
}

export interface ResolutionChoice {
  item_id: number
  context?: string
  concept?: string
  discard?: boolean
  apply_to_all?: boolean
}

export interface ResolutionOutcome {
  session_id: string
  settled: number
  pending: number
  resolved: number
}

export interface InsertionReport {
  branch: string
  node_id: number
  level: number
  created_level: boolean
}

export interface CommitReport {
  session_id: string
  phase: string
  reports: InsertionReport[]
  rectangles: { domain: string[]; documents: number[] }[]
  documents: { id: number; significant: string[] }[]
}

export interface TermLabel {
  concept: string
  representative: string
}

export interface ThesaurusNodeView {
  id: number
  parent: number | null
  added_terms: TermLabel[]
  removed_docs: number[]
}

export interface ThesaurusLevel {
  level: number
  nodes: ThesaurusNodeView[]
}

export interface RegisteredDocument {
  id: number
  language: string
  title: string | null
  uri: string | null
}

export interface ThesaurusView {
  language: string
  levels: ThesaurusLevel[]
  documents: RegisteredDocument[]
}

export interface QueryHit {
  node_id: number
  domain: string[]
  documents: number[]
  feedback: string[]
}

export interface QueryResult {
  language: string
  concepts: string[]
  unknown: string[]
  labels: Record<string, string>
  rectangles: QueryHit[]
  documents: number[]
}

export interface ConceptView {
  concept: string
  language: string
  representative: string
  category: string
  synonyms: string[]
  related: TermLabel[]
}

interface ErrorBody {
  error?: { code?: string; message?: string; details?: Record<string, unknown> }
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly details: Record<string, unknown> = {},
  ) {
    super(message)
    this.name = 'ApiError'
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>

export class ApiClient {
  private fetchFn: FetchLike

  constructor(private base = '', fetchFn?: FetchLike) {
    this.fetchFn = fetchFn ?? ((input, init) => globalThis.fetch(input, init))
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<{ data: T; raw: string }> {
    const init: RequestInit = { method }
    if (body !== undefined) {
      init.headers = { 'content-type': 'application/json' }
      init.body = JSON.stringify(body)
    }
    const res = await this.fetchFn(this.base + path, init)
    const raw = await res.text()
    let parsed: unknown = null
    try {
      parsed = raw ? JSON.parse(raw) : null
    } catch {
      parsed = null
    }
    if (!res.ok) {
      const err = (parsed as ErrorBody | null)?.error
      throw new ApiError(
        res.status,
        err?.code ?? 'http_error',
        err?.message ?? `request failed with status ${res.status}`,
        err?.details ?? {},
      )
    }
    return { data: parsed as T, raw }
  }

  async createSession(documents: DocumentPayload[]): Promise<SessionInfo> {
    const { data } = await this.request<{ session: SessionInfo }>('POST', '/sessions', { documents })
    return data.session
  }

  async session(id: string): Promise<SessionInfo> {
    const { data } = await this.request<{ session: SessionInfo }>('GET', `/sessions/${encodeURIComponent(id)}`)
    return data.session
  }

  async ambiguities(id: string): Promise<AmbiguityList> {
    const { data } = await this.request<AmbiguityList>('GET', `/sessions/${encodeURIComponent(id)}/ambiguities`)
    return data
  }

  async resolve(id: string, resolutions: ResolutionChoice[]): Promise<ResolutionOutcome> {
    const { data } = await this.request<ResolutionOutcome>(
      'POST', `/sessions/${encodeURIComponent(id)}/resolutions`, { resolutions })
    return data
  }

  async commit(id: string): Promise<CommitReport> {
    const { data } = await this.request<CommitReport>('POST', `/sessions/${encodeURIComponent(id)}/commit`)
    return data
  }

  async thesaurus(lang: string): Promise<{ view: ThesaurusView; raw: string }> {
    const params = new URLSearchParams({ lang })
    const { data, raw } = await this.request<ThesaurusView>('GET', `/thesaurus?${params}`)
    return { view: data, raw }
  }

  /** `terms` is the comma-separated list exactly as typed. */
  async query(lang: string, terms: string): Promise<{ result: QueryResult; raw: string }> {
    const params = new URLSearchParams({ lang, terms })
    const { data, raw } = await this.request<QueryResult>('GET', `/query?${params}`)
    return { result: data, raw }
  }

  async concept(id: string, lang: string): Promise<ConceptView> {
    const params = new URLSearchParams({ lang })
    const { data } = await this.request<ConceptView>(
      'GET', `/concepts/${encodeURIComponent(id)}?${params}`)
    return data
  }
}
