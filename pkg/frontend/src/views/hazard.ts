import type { ApiClient } from "../api.js"
import { el, clear } from "../dom.js"
import { formatPercent, fullPrecision } from "../format.js"
import { Sequencer } from "../state.js"

// Constant-hazard calculator: restate a cumulative risk over a new horizon.

export class HazardView {
  readonly root: HTMLElement
  private readonly probability: HTMLInputElement
  private readonly horizon: HTMLInputElement
  private readonly target: HTMLInputElement
  private readonly out: HTMLDivElement
  private readonly seq = new Sequencer()

  constructor(private readonly api: ApiClient) {
    this.root = el("div", { class: "panel" }, [el("h2", {}, ["hazard rescaling"])])
    this.probability = el("input", { type: "number", step: "0.1", min: "0", max: "100", value: "14" })
    this.horizon = el("input", { type: "number", step: "any", min: "0", value: "5" })
    this.target = el("input", { type: "number", step: "any", min: "0", value: "15" })
    this.out = el("div", { class: "headline" })
    const run = el("button", { class: "primary" }, ["rescale"])
    run.addEventListener("click", () => void this.run())
    this.root.append(
      el("div", { class: "controls" }, [
        el("label", {}, ["risk (%) ", this.probability]),
        el("label", {}, ["over years ", this.horizon]),
        el("label", {}, ["restate to years ", this.target]),
        run,
      ]),
      this.out,
    )
  }

  async run(): Promise<void> {
    const ticket = this.seq.next()
    try {
      const result = await this.api.rescaleHazard(
        Number(this.probability.value) / 100,
        Number(this.horizon.value),
        Number(this.target.value),
      )
      if (!this.seq.isLatest(ticket)) return
      clear(this.out)
      this.out.textContent = formatPercent(result.probability)
      this.out.title = fullPrecision(result.probability)
      this.out.append(el("small", {}, [`over ${result.horizon_years} years`]))
    } catch (error) {
      if (!this.seq.isLatest(ticket)) return
      clear(this.out)
      this.out.append(
        el("div", { class: "inline-error" }, [
          error instanceof Error ? error.message : String(error),
        ]),
      )
    }
  }
}
