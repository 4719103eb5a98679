import { describe, expect, it } from 'vitest'
import { ApiClient, ApiError, FetchLike, PendingItem } from '../src/api.js'
import { SessionController, groupKey, groupPending } from '../src/session.js'

const BANK_CANDIDATES = [
  { context: 'finance', concept: 'C_FIN', representative: 'Bank' },
  { context: 'geography', concept: 'C_RIVERBANK', representative: 'Riverbank' },
]

function bankItem(id: number, position: number, surface = 'bank'): PendingItem {
  return {
    item_id: id,
    document: 4,
    phrase: 1,
    position,
    surface,
    normal_form: 'bank',
    language: 'en',
    candidates: BANK_CANDIDATES,
  }
}

const UNKNOWN_ITEM: PendingItem = {
  item_id: 6,
  document: 4,
  phrase: 4,
  position: 4,
  surface: 'gigantic',
  normal_form: null,
  language: 'en',
  candidates: [],
}

/** Minimal in-memory stand-in for the session endpoints. */
function fakeSessionServer() {
  const items = [bankItem(1, 2), bankItem(2, 6, 'Bank'), bankItem(3, 10), bankItem(4, 12), bankItem(5, 2), UNKNOWN_ITEM]
  const settled = new Set<number>()
  let committed = false

  const sessionBody = () => ({
    schema_version: 1,
    session: {
      id: 's1',
      phase: committed ? 'committed' : 'awaiting-resolutions',
      documents: [{ id: 4, language: 'en', title: null }],
      items: items.length,
      pending: items.length - settled.size,
      resolved: settled.size,
    },
  })

  const fetchFn: FetchLike = async (url, init) => {
    const method = init?.method ?? 'GET'
    if (method === 'POST' && url.endsWith('/sessions')) {
      return Response.json(sessionBody(), { status: 201 })
    }
    if (url.endsWith('/ambiguities')) {
      return Response.json({
        schema_version: 1,
        session_id: 's1',
        pending: items.filter((i) => !settled.has(i.item_id)),
        resolved: settled.size,
      })
    }
    if (url.endsWith('/resolutions')) {
      const body = JSON.parse(init!.body as string) as {
        resolutions: { item_id: number; apply_to_all?: boolean }[]
      }
      let count = 0
      for (const r of body.resolutions) {
        const target = items.find((i) => i.item_id === r.item_id)
        if (!target || settled.has(target.item_id)) continue
        const matches = r.apply_to_all
          ? items.filter((i) => !settled.has(i.item_id) && groupKey(i) === groupKey(target))
          : [target]
        for (const m of matches) settled.add(m.item_id)
        count += matches.length
      }
      return Response.json({
        schema_version: 1,
        session_id: 's1',
        settled: count,
        pending: items.length - settled.size,
        resolved: settled.size,
      })
    }
    if (url.endsWith('/commit')) {
      const pending = items.length - settled.size
      if (pending > 0) {
        return Response.json(
          {
            schema_version: 1,
            error: { code: 'pending_ambiguities', message: `${pending} left`, details: { count: pending } },
          },
          { status: 409 },
        )
      }
      committed = true
      return Response.json({
        schema_version: 1,
        session_id: 's1',
        phase: 'committed',
        reports: [{ branch: 'created', node_id: 2, level: 2, created_level: true }],
        rectangles: [{ domain: ['C_FIN', 'C_SW'], documents: [4] }],
        documents: [{ id: 4, significant: ['C_FIN', 'C_SW'] }],
      })
    }
    if (url.includes('/sessions/')) {
      return Response.json(sessionBody())
    }
    return Response.json({ error: { code: 'unknown', message: url } }, { status: 404 })
  }
  return fetchFn
}

describe('groupPending', () => {
  it('clusters case-insensitively by form, language and candidates', () => {
    const items = [bankItem(1, 2), bankItem(2, 6, 'Bank'), UNKNOWN_ITEM]
    const groups = groupPending(items)
    expect(groups).toHaveLength(2)
    expect(groups[0]!.items).toHaveLength(2)
    expect(groups[1]!.label).toBe('gigantic')
  })

  it('separates identical forms from different languages', () => {
    const de = { ...bankItem(9, 1), language: 'de' }
    expect(groupPending([bankItem(1, 2), de])).toHaveLength(2)
  })
})

describe('SessionController', () => {
  it('drives the ambiguity workflow with two user actions', async () => {
    const controller = new SessionController(new ApiClient('', fakeSessionServer()))
    await controller.open([{ language: 'en', text: 'irrelevant here' }])

    const groups = controller.groups()
    expect(groups).toHaveLength(2)
    const bank = groups.find((g) => g.label.toLowerCase() === 'bank')!
    const unknown = groups.find((g) => g.label === 'gigantic')!
    expect(bank.items).toHaveLength(5)
    expect(bank.candidates.map((c) => c.context)).toEqual(['finance', 'geography'])

    // committing too early surfaces the conflict
    const early = await controller.commit().catch((e: unknown) => e)
    expect(early).toBeInstanceOf(ApiError)
    expect((early as ApiError).code).toBe('pending_ambiguities')

    // action 1: one choice covers all five occurrences
    expect(await controller.resolveGroup(bank, { context: 'finance' })).toBe(5)
    expect(controller.pending).toHaveLength(1)

    // action 2: drop the unknown token
    expect(await controller.resolveGroup(unknown, { discard: true })).toBe(1)
    expect(controller.pending).toHaveLength(0)

    const report = await controller.commit()
    expect(report.rectangles).toEqual([{ domain: ['C_FIN', 'C_SW'], documents: [4] }])
    expect(controller.info!.phase).toBe('committed')
  })

  it('can settle a single occurrence when apply-to-all is off', async () => {
    const controller = new SessionController(new ApiClient('', fakeSessionServer()))
    await controller.open([{ language: 'en', text: 'x' }])
    const bank = controller.groups().find((g) => g.label.toLowerCase() === 'bank')!
    expect(await controller.resolveGroup(bank, { context: 'geography' }, false)).toBe(1)
    expect(controller.pending).toHaveLength(5)
  })
})
