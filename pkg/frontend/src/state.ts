import type { EvaluationReport, Override } from "./api.js"

export type ViewName = "cascade" | "grid" | "tornado" | "hazard" | "scenarios"

// Working state shared by the views: the active model, the unsaved overrides,
// and the latest evaluation. Views subscribe to re-render when another view
// (e.g. a scenario load) replaces the overrides.
export class UiState {
  activeModel: string
  overrides: Record<string, Override> = {}
  lastReport: EvaluationReport | null = null
  view: ViewName = "cascade"

  private listeners: Array<() => void> = []

  constructor(activeModel: string) {
    this.activeModel = activeModel
  }

  subscribe(listener: () => void): void {
    this.listeners.push(listener)
  }

  notify(): void {
    for (const listener of this.listeners) listener()
  }

  replaceOverrides(overrides: Record<string, Override>): void {
    this.overrides = { ...overrides }
    this.notify()
  }

  setOverride(factorId: string, value: Override): void {
    this.overrides[factorId] = value
  }
}

// Drops responses that were superseded by a later commit: each view keeps one
// sequencer so at most one in-flight evaluation can win.
export class Sequencer {
  private current = 0

  next(): number {
    return ++this.current
  }

  isLatest(ticket: number): boolean {
    return ticket === this.current
  }
}
