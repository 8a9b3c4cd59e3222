import type { ApiClient, Override, ScenarioDoc } from "../api.js"
import { el, clear } from "../dom.js"
import { UiState } from "../state.js"

// Save the working overrides under a note; list stored scenarios; load one
// back into the working state after confirmation. Storage conflicts and
// other API errors are surfaced verbatim.

export class ScenariosView {
  readonly root: HTMLElement
  private readonly noteInput: HTMLInputElement
  private readonly list: HTMLUListElement
  private readonly message: HTMLDivElement
  private readonly confirmLoad: (scenario: ScenarioDoc) => boolean

  constructor(
    private readonly api: ApiClient,
    private readonly state: UiState,
    confirmLoad?: (scenario: ScenarioDoc) => boolean,
  ) {
    this.confirmLoad =
      confirmLoad ??
      ((scenario) => window.confirm(`Replace working overrides with scenario ${scenario.id}?`))
    this.root = el("div")
    this.noteInput = el("input", { type: "text", placeholder: "scenario note" })
    this.list = el("ul", { class: "scenario-list" })
    this.message = el("div", { class: "inline-error", hidden: "hidden" })
    this.build()
  }

  private build(): void {
    const save = el("button", { class: "primary" }, ["save current overrides"])
    save.addEventListener("click", () => void this.save())
    this.root.append(
      el("div", { class: "panel" }, [
        el("h2", {}, ["save scenario"]),
        el("div", { class: "controls" }, [this.noteInput, save]),
        this.message,
      ]),
      el("div", { class: "panel" }, [el("h2", {}, ["stored scenarios"]), this.list]),
    )
    void this.refresh()
  }

  async refresh(): Promise<void> {
    const { scenarios } = await this.api.listScenarios()
    clear(this.list)
    if (!scenarios.length) {
      this.list.append(el("li", { class: "note" }, ["no scenarios stored yet"]))
      return
    }
    for (const scenario of scenarios) {
      const load = el("button", {}, ["load"])
      load.addEventListener("click", () => this.load(scenario))
      this.list.append(
        el("li", {}, [
          el("code", {}, [scenario.id]),
          el("span", {}, [scenario.note || "(no note)"]),
          el("span", { class: "note" }, [`on ${scenario.base_model}`]),
          load,
        ]),
      )
    }
  }

  private async save(): Promise<void> {
    this.message.hidden = true
    try {
      await this.api.saveScenario(this.state.activeModel, this.state.overrides, this.noteInput.value)
      await this.refresh()
    } catch (error) {
      this.message.textContent = error instanceof Error ? error.message : String(error)
      this.message.hidden = false
    }
  }

  private load(scenario: ScenarioDoc): void {
    if (!this.confirmLoad(scenario)) return
    const overrides: Record<string, Override> = {}
    for (const [factorId, value] of Object.entries(scenario.overrides)) {
      overrides[factorId] = value === null ? "N/A" : value
    }
    this.state.replaceOverrides(overrides)
  }
}
