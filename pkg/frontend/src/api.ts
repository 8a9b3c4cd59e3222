// Typed client for the local workbench API. Every request is appended to
// `log` so tests can audit that displayed numbers originate from responses,
// never from client-side probability arithmetic.

export type Override = number | "N/A"

export interface FactorDoc {
  id: string
  label: string
  group: string
  probability: number | "N/A" | null
  rationale?: string
  source?: string
  source_ref?: string
}

export interface BucketDoc {
  label: string
  lower: number
  upper: number
  open_low?: boolean
  open_high?: boolean
}

export interface DistributionDoc {
  name: string
  unit: string
  buckets: BucketDoc[]
  weights: number[]
}

export interface ModelDoc {
  schema_version: number
  model: {
    name: string
    horizon_year: number
    notes?: string
    factors: FactorDoc[]
  }
  distributions: DistributionDoc[]
  device_specs: unknown[]
  annotations: Record<string, string>
}

export interface ModelSummary {
  id: string
  name: string
  horizon_year: number
  joint_odds: number
  factor_count: number
}

export interface FactorContribution {
  factor_id: string
  probability: number
  cumulative: number
}

export interface EvaluationReport {
  model: string
  joint_odds: number
  per_factor: FactorContribution[]
}

export interface SolveResult {
  multiplier: number
  achieved_joint: number
  scaled_factors: Record<string, number | null>
}

export interface TornadoEntry {
  factor_id: string
  low_input: number
  high_input: number
  joint_low: number
  joint_high: number
}

export interface GridResult {
  qualifying_mass: number
  threshold: number
  strict: boolean
  row_labels: string[]
  col_labels: string[]
  cell_cost: number[][]
  cell_mass: number[][]
  cell_qualifies: boolean[][]
}

export interface ScenarioDoc {
  id: string
  base_model: string
  overrides: Record<string, number | null>
  created_at: string
  note: string
}

export interface ApiErrorPayload {
  code: "bad-request" | "not-found" | "infeasible" | "storage"
  message: string
  detail?: { max_achievable?: number }
}

export class ApiHttpError extends Error {
  constructor(
    readonly status: number,
    readonly payload: ApiErrorPayload,
  ) {
    super(payload.message)
  }
}

export interface RequestLogEntry {
  method: string
  url: string
  body?: unknown
}

export class ApiClient {
  readonly log: RequestLogEntry[] = []

  constructor(private readonly fetchFn: typeof fetch) {}

  private async request<T>(method: string, url: string, body?: unknown): Promise<T> {
    this.log.push({ method, url, body })
    const response = await this.fetchFn(url, {
      method,
      headers: body === undefined ? undefined : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    })
    const payload = await response.json()
    if (!response.ok) {
      throw new ApiHttpError(response.status, payload as ApiErrorPayload)
    }
    return payload as T
  }

  listModels(): Promise<{ models: ModelSummary[] }> {
    return this.request("GET", "/api/models")
  }

  getModel(id: string): Promise<ModelDoc> {
    return this.request("GET", `/api/models/${encodeURIComponent(id)}`)
  }

  evaluate(model: string, overrides: Record<string, Override>): Promise<EvaluationReport> {
    return this.request("POST", "/api/evaluate", { model, overrides })
  }

  solve(
    model: string,
    target: number,
    subset: string | { ids: string[] },
    overrides: Record<string, Override>,
  ): Promise<SolveResult> {
    return this.request("POST", "/api/solve", { model, target, subset, overrides })
  }

  tornado(
    model: string,
    ranges: Record<string, [number, number]>,
    overrides: Record<string, Override>,
  ): Promise<{ entries: TornadoEntry[] }> {
    return this.request("POST", "/api/tornado", { model, ranges, overrides })
  }

  evaluateGrid(
    rows: DistributionDoc,
    cols: DistributionDoc,
    threshold: number,
    strict: boolean,
  ): Promise<GridResult> {
    return this.request("POST", "/api/grids/evaluate", { rows, cols, threshold, strict })
  }

  rescaleHazard(
    probability: number,
    horizonYears: number,
    targetYears: number,
  ): Promise<{ probability: number; horizon_years: number }> {
    return this.request("POST", "/api/hazard/rescale", {
      probability,
      horizon_years: horizonYears,
      target_years: targetYears,
    })
  }

  listScenarios(): Promise<{ scenarios: ScenarioDoc[] }> {
    return this.request("GET", "/api/scenarios")
  }

  saveScenario(
    baseModel: string,
    overrides: Record<string, Override>,
    note: string,
  ): Promise<{ id: string }> {
    return this.request("POST", "/api/scenarios", { base_model: baseModel, overrides, note })
  }
}
