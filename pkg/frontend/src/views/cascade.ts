import type { ApiClient, ModelDoc, Override } from "../api.js"
import { el, clear } from "../dom.js"
import { formatPercent, fullPrecision } from "../format.js"
import { Sequencer, UiState } from "../state.js"

// Per-factor sliders with a live joint-odds headline. Sliders commit on
// release; every committed change triggers one evaluation request, and the
// headline only re-renders from the response (stale responses are discarded).

interface FactorRow {
  slider: HTMLInputElement
  numeric: HTMLInputElement
  naToggle: HTMLInputElement
  bar: HTMLDivElement
  barLabel: HTMLTableCellElement
}

export class CascadeView {
  readonly root: HTMLElement
  private readonly headlineValue: HTMLSpanElement
  private readonly errorBox: HTMLDivElement
  private readonly rows = new Map<string, FactorRow>()
  private readonly seq = new Sequencer()

  constructor(
    private readonly api: ApiClient,
    private readonly state: UiState,
    private readonly doc: ModelDoc,
  ) {
    this.root = el("div")
    this.headlineValue = el("span")
    this.errorBox = el("div", { class: "inline-error", hidden: "hidden" })
    this.build()
    this.state.subscribe(() => this.syncInputsFromState())
  }

  private build(): void {
    const headline = el("div", { class: "headline" }, [this.headlineValue])
    headline.append(el("small", {}, [`joint odds of ${this.doc.model.name}`]))
    this.root.append(headline, this.errorBox)

    const table = el("table", { class: "factors" })
    table.append(
      el("tr", {}, [
        el("th", {}, ["event"]),
        el("th", {}, ["probability"]),
        el("th", {}, ["%"]),
        el("th", {}, ["N/A"]),
        el("th", {}, ["running product"]),
        el("th", {}, [""]),
      ]),
    )

    for (const factor of this.doc.model.factors) {
      const slider = el("input", {
        type: "range",
        min: "0",
        max: "100",
        step: "0.1",
        "data-factor": factor.id,
      })
      const numeric = el("input", {
        type: "number",
        min: "0",
        max: "100",
        step: "0.1",
        class: "numeric",
        "data-factor": factor.id,
      })
      const naToggle = el("input", { type: "checkbox", "data-factor": factor.id })
      const barFill = el("div")
      const bar = el("div", { class: "bar" }, [barFill])
      const barLabel = el("td", { class: "bar-label" })

      const isNa = factor.probability === "N/A" || factor.probability === null
      if (isNa) {
        naToggle.checked = true
        slider.disabled = true
        numeric.disabled = true
        slider.value = "100"
        numeric.value = "100"
      } else {
        const percent = (factor.probability as number) * 100
        slider.value = String(percent)
        numeric.value = String(percent)
      }

      slider.addEventListener("change", () => {
        numeric.value = slider.value
        this.commit(factor.id, Number(slider.value))
      })
      numeric.addEventListener("change", () => {
        const value = Number(numeric.value)
        if (!numeric.value.trim() || Number.isNaN(value) || value < 0 || value > 100) {
          numeric.classList.add("invalid")
          return
        }
        numeric.classList.remove("invalid")
        slider.value = numeric.value
        this.commit(factor.id, value)
      })
      naToggle.addEventListener("change", () => {
        slider.disabled = naToggle.checked
        numeric.disabled = naToggle.checked
        this.commit(factor.id, naToggle.checked ? "N/A" : Number(slider.value))
      })

      const row = el("tr", {}, [
        el("td", {}, [
          factor.label,
          el("div", { class: "rationale" }, [factor.rationale ?? ""]),
        ]),
        el("td", {}, [slider]),
        el("td", {}, [numeric]),
        el("td", {}, [naToggle]),
        el("td", {}, [bar]),
        barLabel,
      ])
      table.append(row)
      this.rows.set(factor.id, { slider, numeric, naToggle, bar: barFill, barLabel })
    }
    this.root.append(table)
  }

  private commit(factorId: string, value: number | Override): void {
    const override: Override = value === "N/A" ? "N/A" : (value as number) / 100
    this.state.setOverride(factorId, override)
    void this.refresh()
  }

  // One evaluation per committed gesture; the headline changes only when the
  // freshest response lands.
  async refresh(): Promise<void> {
    const ticket = this.seq.next()
    try {
      const report = await this.api.evaluate(this.state.activeModel, this.state.overrides)
      if (!this.seq.isLatest(ticket)) return
      this.state.lastReport = report
      this.renderReport()
      this.hideError()
    } catch (error) {
      if (!this.seq.isLatest(ticket)) return
      this.showError(error instanceof Error ? error.message : String(error))
    }
  }

  private renderReport(): void {
    const report = this.state.lastReport
    if (!report) return
    this.headlineValue.textContent = formatPercent(report.joint_odds)
    this.headlineValue.title = fullPrecision(report.joint_odds)
    for (const contribution of report.per_factor) {
      const row = this.rows.get(contribution.factor_id)
      if (!row) continue
      row.bar.style.width = `${contribution.cumulative * 100}%`
      row.barLabel.textContent = formatPercent(contribution.cumulative)
      row.barLabel.title = fullPrecision(contribution.cumulative)
    }
  }

  private syncInputsFromState(): void {
    for (const factor of this.doc.model.factors) {
      const row = this.rows.get(factor.id)
      if (!row) continue
      const override = this.state.overrides[factor.id]
      const base = factor.probability === "N/A" || factor.probability === null
        ? "N/A"
        : (factor.probability as number)
      const value = override ?? base
      if (value === "N/A") {
        row.naToggle.checked = true
        row.slider.disabled = true
        row.numeric.disabled = true
      } else {
        row.naToggle.checked = false
        row.slider.disabled = false
        row.numeric.disabled = false
        row.slider.value = String(value * 100)
        row.numeric.value = String(value * 100)
      }
    }
    void this.refresh()
  }

  private showError(message: string): void {
    clear(this.errorBox)
    const retry = el("button", { class: "primary" }, ["retry"])
    retry.addEventListener("click", () => void this.refresh())
    this.errorBox.append(`evaluation failed: ${message}`, retry)
    this.errorBox.hidden = false
  }

  private hideError(): void {
    this.errorBox.hidden = true
  }
}
