/**
 * Query browser state: the current term list, the last result and the
 * raw response body it was parsed from.
 */

import { ApiClient, QueryResult } from './api.js'

/** Terms are comma-separated; spaces inside a term belong to compounds. */
export function splitTerms(input: string): string[] {
  return input
    .split(',')
    .map((t) => t.trim())
    .filter((t) => t.length > 0)
}

export class QueryController {
  language = 'en'
  terms: string[] = []
  result: QueryResult | null = null
  lastRaw: string | null = null

  constructor(private api: ApiClient) {}

  async search(language: string, input: string | string[]): Promise<QueryResult> {
    const terms = Array.isArray(input) ? input : splitTerms(input)
    const { result, raw } = await this.api.query(language, terms.join(','))
    this.language = language
    this.terms = terms
    this.result = result
    this.lastRaw = raw
    return result
  }

  /** Broadening drops one term and repeats the search. */
  async broaden(term: string): Promise<QueryResult> {
    const rest = this.terms.filter((t) => t !== term)
    if (rest.length === this.terms.length) {
      throw new Error(`term not in query: ${term}`)
    }
    if (rest.length === 0) {
      throw new Error('cannot broaden a single-term query')
    }
    return this.search(this.language, rest)
  }

  /** Narrowing appends a feedback term. */
  async narrow(term: string): Promise<QueryResult> {
    return this.search(this.language, [...this.terms, term])
  }

  documents(): number[] {
    return this.result ? [...this.result.documents] : []
  }

  label(concept: string): string {
    return this.result?.labels[concept] ?? concept
  }
}
