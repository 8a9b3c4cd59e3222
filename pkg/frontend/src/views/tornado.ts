import { ApiHttpError, type ApiClient, type ModelDoc, type TornadoEntry } from "../api.js"
import { el, clear } from "../dom.js"
import { formatMultiplier, formatPercent, fullPrecision } from "../format.js"
import { Sequencer, UiState } from "../state.js"

// One-at-a-time sensitivity bars plus the inverse solver. Infeasible targets
// are an expected outcome: they render the maximum achievable odds inline
// instead of an error state.

export class TornadoView {
  readonly root: HTMLElement
  private readonly bars: HTMLDivElement
  private readonly solverOut: HTMLDivElement
  private readonly targetInput: HTMLInputElement
  private readonly subsetSelect: HTMLSelectElement
  private readonly lowInputs = new Map<string, HTMLInputElement>()
  private readonly highInputs = new Map<string, HTMLInputElement>()
  private readonly seq = new Sequencer()

  constructor(
    private readonly api: ApiClient,
    private readonly state: UiState,
    private readonly doc: ModelDoc,
  ) {
    this.root = el("div")
    this.bars = el("div")
    this.solverOut = el("div")
    this.targetInput = el("input", { type: "number", step: "0.1", min: "0", max: "100" })
    this.subsetSelect = el("select")
    this.build()
  }

  private build(): void {
    const rangesPanel = el("div", { class: "panel" }, [el("h2", {}, ["sweep ranges (%)"])])
    for (const factor of this.doc.model.factors) {
      const low = el("input", { type: "number", min: "0", max: "100", step: "0.1", value: "5" })
      const high = el("input", { type: "number", min: "0", max: "100", step: "0.1", value: "95" })
      this.lowInputs.set(factor.id, low)
      this.highInputs.set(factor.id, high)
      rangesPanel.append(el("label", {}, [`${factor.label} `, low, " to ", high]), el("br"))
    }
    const sweep = el("button", { class: "primary" }, ["run sweep"])
    sweep.addEventListener("click", () => void this.runSweep())
    rangesPanel.append(sweep)

    const solverPanel = el("div", { class: "panel" }, [el("h2", {}, ["target joint odds (%)"])])
    for (const choice of ["all", "software", "hardware", "sociopolitical"]) {
      this.subsetSelect.append(el("option", { value: choice }, [choice]))
    }
    const solve = el("button", { class: "primary" }, ["solve"])
    solve.addEventListener("click", () => void this.runSolve())
    solverPanel.append(
      el("div", { class: "controls" }, [this.targetInput, this.subsetSelect, solve]),
      this.solverOut,
    )

    this.root.append(rangesPanel, this.bars, solverPanel)
  }

  async runSweep(): Promise<void> {
    const ranges: Record<string, [number, number]> = {}
    for (const factor of this.doc.model.factors) {
      const low = Number(this.lowInputs.get(factor.id)?.value)
      const high = Number(this.highInputs.get(factor.id)?.value)
      ranges[factor.id] = [low / 100, high / 100]
    }
    const ticket = this.seq.next()
    const { entries } = await this.api.tornado(this.state.activeModel, ranges, this.state.overrides)
    if (!this.seq.isLatest(ticket)) return
    this.renderBars(entries)
  }

  private renderBars(entries: TornadoEntry[]): void {
    clear(this.bars)
    const widest = entries.length ? entries[0]!.joint_high - entries[0]!.joint_low : 0
    for (const entry of entries) {
      const fill = el("div")
      if (widest > 0) {
        const left = (entry.joint_low / (entries[0]!.joint_high || 1)) * 100
        const width = ((entry.joint_high - entry.joint_low) / (entries[0]!.joint_high || 1)) * 100
        fill.style.left = `${left}%`
        fill.style.width = `${Math.max(width, 0.5)}%`
      }
      const label = el("span", {}, [
        `${formatPercent(entry.joint_low, 2)} to ${formatPercent(entry.joint_high, 2)}`,
      ])
      label.title = `${fullPrecision(entry.joint_low)} .. ${fullPrecision(entry.joint_high)}`
      this.bars.append(
        el("div", { class: "tornado-row" }, [
          el("span", {}, [entry.factor_id]),
          el("div", { class: "tornado-bar" }, [fill]),
          label,
        ]),
      )
    }
  }

  async runSolve(): Promise<void> {
    const target = Number(this.targetInput.value) / 100
    const ticket = this.seq.next()
    try {
      const result = await this.api.solve(
        this.state.activeModel,
        target,
        this.subsetSelect.value,
        this.state.overrides,
      )
      if (!this.seq.isLatest(ticket)) return
      clear(this.solverOut)
      const achieved = el("div", { class: "headline" }, [formatPercent(result.achieved_joint)])
      achieved.title = fullPrecision(result.achieved_joint)
      achieved.append(
        el("small", {}, [`achieved with uniform multiplier ${formatMultiplier(result.multiplier)}`]),
      )
      const list = el("ul", { class: "scenario-list" })
      for (const [factorId, value] of Object.entries(result.scaled_factors)) {
        list.append(
          el("li", {}, [
            factorId,
            el("span", { class: "note" }, [value === null ? "N/A" : formatPercent(value)]),
          ]),
        )
      }
      this.solverOut.append(achieved, list)
    } catch (error) {
      if (!this.seq.isLatest(ticket)) return
      clear(this.solverOut)
      if (error instanceof ApiHttpError && error.payload.code === "infeasible") {
        const max = error.payload.detail?.max_achievable
        this.solverOut.append(
          el("div", { class: "panel" }, [
            `infeasible, max ${max === undefined ? "?" : formatPercent(max)}`,
          ]),
        )
        return
      }
      this.solverOut.append(
        el("div", { class: "inline-error" }, [
          error instanceof Error ? error.message : String(error),
        ]),
      )
    }
  }
}
