/**
 * Disambiguation workbench state.
 *
 * Pending items are grouped so one user action can settle every
 * occurrence of the same undecided form (the server's apply_to_all).
 */

import {
  ApiClient,
  Candidate,
  CommitReport,
  DocumentPayload,
  PendingItem,
  SessionInfo,
} from './api.js'

export interface PendingGroup {
  key: string
  label: string
  language: string
  candidates: Candidate[]
  items: PendingItem[]
}

export function groupKey(item: PendingItem): string {
  const form = (item.normal_form ?? item.surface).toLowerCase()
  const signature = item.candidates.map((c) => `${c.context}=${c.concept}`).join(',')
  return `${item.language}\t${form}\t${signature}`
}

export function groupPending(items: PendingItem[]): PendingGroup[] {
  const groups = new Map<string, PendingGroup>()
  for (const item of items) {
    const key = groupKey(item)
    let group = groups.get(key)
    if (!group) {
      group = {
        key,
        label: item.surface,
        language: item.language,
        candidates: item.candidates,
        items: [],
      }
      groups.set(key, group)
    }
    group.items.push(item)
  }
  return [...groups.values()]
}

export interface Choice {
  context?: string
  concept?: string
  discard?: boolean
}

export class SessionController {
  info: SessionInfo | null = null
  pending: PendingItem[] = []
  report: CommitReport | null = null

  constructor(private api: ApiClient) {}

  get id(): string {
    if (!this.info) throw new Error('no session open')
    return this.info.id
  }

  async open(documents: DocumentPayload[]): Promise<SessionInfo> {
    this.report = null
    this.info = await this.api.createSession(documents)
    await this.refresh()
    return this.info
  }

  async refresh(): Promise<void> {
    const listing = await this.api.ambiguities(this.id)
    this.pending = listing.pending
    this.info = await this.api.session(this.id)
  }

  groups(): PendingGroup[] {
    return groupPending(this.pending)
  }

  /**
   * One user action. With applyToAll (the default) the server settles
   * every pending occurrence of the group's form in one round trip.
   */
  async resolveGroup(group: PendingGroup, choice: Choice, applyToAll = true): Promise<number> {
    const head = group.items[0]
    if (!head) return 0
    const outcome = await this.api.resolve(this.id, [
      {
        item_id: head.item_id,
        context: choice.context,
        concept: choice.concept,
        discard: choice.discard ?? false,
        apply_to_all: applyToAll,
      },
    ])
    await this.refresh()
    return outcome.settled
  }

  async commit(): Promise<CommitReport> {
    this.report = await this.api.commit(this.id)
    await this.refresh()
    return this.report
  }
}
