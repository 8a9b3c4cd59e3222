import type { EvaluationReport, ModelDoc } from "../src/api.js"

export interface RecordedCall {
  method: string
  url: string
  body?: unknown
}

type Handler = (
  body: unknown,
) => { status?: number; payload: unknown } | Promise<{ status?: number; payload: unknown }>

// Fetch double that records every call and serves canned JSON; views must get
// every displayed number from these payloads.
export class FetchStub {
  readonly calls: RecordedCall[] = []
  private readonly handlers = new Map<string, Handler>()

  on(method: string, url: string, handler: Handler): void {
    this.handlers.set(`${method} ${url}`, handler)
  }

  readonly fetch = (async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = String(input)
    const method = init?.method ?? "GET"
    const body = init?.body ? JSON.parse(String(init.body)) : undefined
    this.calls.push({ method, url, body })
    const handler = this.handlers.get(`${method} ${url}`)
    if (!handler) {
      throw new Error(`no stub registered for ${method} ${url}`)
    }
    const { status = 200, payload } = await handler(body)
    return new Response(JSON.stringify(payload), {
      status,
      headers: { "Content-Type": "application/json" },
    })
  }) as typeof fetch
}

export async function flush(times = 4): Promise<void> {
  for (let i = 0; i < times; i++) {
    await new Promise((resolve) => setTimeout(resolve, 0))
  }
}

export const BASELINE_REPORT: EvaluationReport = {
  model: "tagi-2043",
  joint_odds: 0.003996179712,
  per_factor: [
    { factor_id: "algorithms", probability: 0.6, cumulative: 0.6 },
    { factor_id: "learning-speed", probability: 0.4, cumulative: 0.24 },
    { factor_id: "inference-cost", probability: 0.16, cumulative: 0.0384 },
    { factor_id: "robots", probability: 0.6, cumulative: 0.02304 },
    { factor_id: "chips-and-power", probability: 0.46, cumulative: 0.0105984 },
    { factor_id: "regulation", probability: 0.7, cumulative: 0.00741888 },
    { factor_id: "ai-delay", probability: 0.9, cumulative: 0.006676992 },
    { factor_id: "war-derailment", probability: 0.7, cumulative: 0.0046738944 },
    { factor_id: "pandemic-derailment", probability: 0.9, cumulative: 0.00420650496 },
    { factor_id: "depression-derailment", probability: 0.95, cumulative: 0.003996179712 },
  ],
}

export const ROBOTS_REMOVED_REPORT: EvaluationReport = {
  model: "tagi-2043",
  joint_odds: 0.00666029952,
  per_factor: BASELINE_REPORT.per_factor.map((c, i) => ({
    ...c,
    probability: c.factor_id === "robots" ? 1.0 : c.probability,
    cumulative: [0.6, 0.24, 0.0384, 0.0384, 0.017664, 0.0123648, 0.01112832, 0.007789824,
      0.0070108416, 0.00666029952][i]!,
  })),
}

const ROW_REPS = [1e16, 1e17, 1e18, 1e19, 1e20, 1e21, 1e22, 1e23, 1e24, 1e25]
const COL_REPS = [4e14, 4e15, 4e16, 4e17, 4e18]

export const MODEL_DOC: ModelDoc = {
  schema_version: 1,
  model: {
    name: "tagi-2043",
    horizon_year: 2043,
    notes: "reference",
    factors: BASELINE_REPORT.per_factor.map((c) => ({
      id: c.factor_id,
      label: `label for ${c.factor_id}`,
      group:
        c.factor_id === "algorithms" || c.factor_id === "learning-speed"
          ? "software"
          : ["inference-cost", "robots", "chips-and-power"].includes(c.factor_id)
            ? "hardware"
            : "sociopolitical",
      probability: c.probability,
      rationale: "",
      source: "manual",
    })),
  },
  distributions: [
    {
      name: "agi-compute-needs",
      unit: "FLOPS",
      buckets: ROW_REPS.map((rep, i) => ({
        label: `1e${16 + i}`,
        lower: i === 0 || i === 9 ? rep : ROW_REPS[i - 1]!,
        upper: rep,
        open_low: i === 0,
        open_high: i === 9,
      })),
      weights: ROW_REPS.map(() => 0.1),
    },
    {
      name: "compute-efficiency",
      unit: "FLOPS/$-hr",
      buckets: COL_REPS.map((rep, i) => ({
        label: `4e${14 + i}`,
        lower: i === 0 || i === 4 ? rep : COL_REPS[i - 1]!,
        upper: rep,
        open_low: i === 0,
        open_high: i === 4,
      })),
      weights: [0.02, 0.5, 0.4, 0.06, 0.02],
    },
  ],
  device_specs: [],
  annotations: {},
}

// 10x5 reference grid response: strict $25/hr rule, qualifying mass 0.156.
export function referenceGridResult() {
  const cellCost = ROW_REPS.map((r) => COL_REPS.map((c) => r / c))
  const cellQualifies = cellCost.map((row) => row.map((cost) => cost < 25))
  const cellMass = ROW_REPS.map(() => [0.002, 0.05, 0.04, 0.006, 0.002])
  return {
    qualifying_mass: 0.156,
    threshold: 25,
    strict: true,
    row_labels: ROW_REPS.map((_, i) => `1e${16 + i}`),
    col_labels: COL_REPS.map((_, i) => `4e${14 + i}`),
    cell_cost: cellCost,
    cell_mass: cellMass,
    cell_qualifies: cellQualifies,
  }
}
