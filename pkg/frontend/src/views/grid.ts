import type { ApiClient, DistributionDoc, GridResult, ModelDoc } from "../api.js"
import { el, clear } from "../dom.js"
import { formatPercent, fullPrecision } from "../format.js"
import { Sequencer } from "../state.js"

const ROWS_NAME = "agi-compute-needs"
const COLS_NAME = "compute-efficiency"
const WEIGHT_TOLERANCE = 1e-9

// Heatmap over the compute-needs x cost-efficiency grid. Row and column
// weights are editable; a commit is blocked (with the residual shown) until
// each weight set sums to 1, then the qualifying mass is recomputed remotely.

export class GridView {
  readonly root: HTMLElement
  private readonly readout: HTMLSpanElement
  private readonly readoutNote: HTMLSpanElement
  private readonly residualBox: HTMLDivElement
  private readonly heatmap: HTMLTableElement
  private readonly rowInputs: HTMLInputElement[] = []
  private readonly colInputs: HTMLInputElement[] = []
  private readonly thresholdInput: HTMLInputElement
  private readonly strictInput: HTMLInputElement
  private readonly rowsDist: DistributionDoc
  private readonly colsDist: DistributionDoc
  private readonly seq = new Sequencer()

  constructor(
    private readonly api: ApiClient,
    doc: ModelDoc,
  ) {
    const rows = doc.distributions.find((d) => d.name === ROWS_NAME)
    const cols = doc.distributions.find((d) => d.name === COLS_NAME)
    if (!rows || !cols) {
      throw new Error(`model '${doc.model.name}' lacks the ${ROWS_NAME}/${COLS_NAME} attachments`)
    }
    this.rowsDist = rows
    this.colsDist = cols
    this.root = el("div")
    this.readout = el("span")
    this.readoutNote = el("span", { class: "note" })
    this.residualBox = el("div", { class: "inline-error", hidden: "hidden" })
    this.heatmap = el("table", { class: "heatmap" })
    this.thresholdInput = el("input", { type: "number", step: "any", value: "25" })
    this.strictInput = el("input", { type: "checkbox" })
    this.strictInput.checked = true
    this.build()
  }

  private build(): void {
    const headline = el("div", { class: "headline" }, [this.readout])
    headline.append(el("small", {}, ["qualifying mass "]), this.readoutNote)

    const controls = el("div", { class: "controls" })
    controls.append(
      el("label", {}, ["threshold $/hr ", this.thresholdInput]),
      el("label", {}, ["strictly below ", this.strictInput]),
    )
    const recompute = el("button", { class: "primary" }, ["recompute"])
    recompute.addEventListener("click", () => this.commit())
    controls.append(recompute)

    const weightPanels = el("div", { class: "controls" })
    weightPanels.append(
      this.weightPanel("row weights (compute needed)", this.rowsDist, this.rowInputs),
      this.weightPanel("column weights (efficiency)", this.colsDist, this.colInputs),
    )

    this.root.append(headline, controls, this.residualBox, weightPanels, this.heatmap)
    this.commit()
  }

  private weightPanel(
    title: string,
    dist: DistributionDoc,
    inputs: HTMLInputElement[],
  ): HTMLElement {
    const panel = el("div", { class: "panel" }, [el("h2", {}, [title])])
    dist.buckets.forEach((bucket, i) => {
      const input = el("input", {
        type: "number",
        step: "any",
        min: "0",
        max: "1",
        value: String(dist.weights[i]),
      })
      inputs.push(input)
      panel.append(el("label", {}, [`${bucket.label} `, input]), el("br"))
    })
    return panel
  }

  private collectWeights(inputs: HTMLInputElement[], what: string): number[] | null {
    const weights = inputs.map((input) => Number(input.value))
    const total = weights.reduce((a, b) => a + b, 0)
    if (Math.abs(total - 1.0) > WEIGHT_TOLERANCE) {
      const residual = total - 1.0
      this.residualBox.textContent =
        `${what} weights must sum to 1; they sum to ${total} ` +
        `(residual ${residual > 0 ? "+" : ""}${residual})`
      this.residualBox.hidden = false
      return null
    }
    return weights
  }

  commit(): void {
    this.residualBox.hidden = true
    const rowWeights = this.collectWeights(this.rowInputs, "row")
    if (!rowWeights) return
    const colWeights = this.collectWeights(this.colInputs, "column")
    if (!colWeights) return
    const threshold = Number(this.thresholdInput.value)
    if (Number.isNaN(threshold) || threshold < 0) {
      this.residualBox.textContent = "threshold must be a non-negative number"
      this.residualBox.hidden = false
      return
    }
    const rows = { ...this.rowsDist, weights: rowWeights }
    const cols = { ...this.colsDist, weights: colWeights }
    const ticket = this.seq.next()
    void this.api
      .evaluateGrid(rows, cols, threshold, this.strictInput.checked)
      .then((grid) => {
        if (!this.seq.isLatest(ticket)) return
        this.render(grid)
      })
      .catch((error: Error) => {
        if (!this.seq.isLatest(ticket)) return
        this.residualBox.textContent = error.message
        this.residualBox.hidden = false
      })
  }

  private render(grid: GridResult): void {
    this.readout.textContent = formatPercent(grid.qualifying_mass)
    this.readout.title = fullPrecision(grid.qualifying_mass)
    const isReference =
      grid.threshold === 25 &&
      grid.strict &&
      this.rowInputs.every((input, i) => Number(input.value) === this.rowsDist.weights[i]) &&
      this.colInputs.every((input, i) => Number(input.value) === this.colsDist.weights[i])
    this.readoutNote.textContent = isReference ? "published reference: 16%" : ""

    clear(this.heatmap)
    const header = el("tr", {}, [el("th", {}, ["mass"])])
    for (const label of grid.col_labels) header.append(el("th", {}, [label]))
    this.heatmap.append(header)
    grid.cell_mass.forEach((row, i) => {
      const tr = el("tr", {}, [el("th", {}, [grid.row_labels[i] ?? ""])])
      row.forEach((mass, j) => {
        const td = el("td", {}, [formatPercent(mass)])
        td.title = `mass ${fullPrecision(mass)}, cost ${fullPrecision(grid.cell_cost[i]?.[j] ?? NaN)} $/hr`
        if (grid.cell_qualifies[i]?.[j]) td.classList.add("qualifies")
        tr.append(td)
      })
      this.heatmap.append(tr)
    })
  }
}
