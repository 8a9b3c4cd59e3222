import { ApiClient } from "./api.js"
import { el, clear } from "./dom.js"
import { UiState, type ViewName } from "./state.js"
import { CascadeView } from "./views/cascade.js"
import { GridView } from "./views/grid.js"
import { HazardView } from "./views/hazard.js"
import { ScenariosView } from "./views/scenarios.js"
import { TornadoView } from "./views/tornado.js"

const VIEWS: ViewName[] = ["cascade", "grid", "tornado", "hazard", "scenarios"]

async function boot(root: HTMLElement): Promise<void> {
  const api = new ApiClient(window.fetch.bind(window))
  const { models } = await api.listModels()
  const first = models[0]
  if (!first) {
    root.append(el("div", { class: "inline-error" }, ["no models in the store"]))
    return
  }
  const state = new UiState(first.id)
  let currentDoc = await api.getModel(state.activeModel)

  const title = el("h1", {}, ["cascadecalc"])
  const modelSelect = el("select")
  for (const model of models) {
    modelSelect.append(el("option", { value: model.id }, [`${model.id} (${model.horizon_year})`]))
  }
  const tabs = el("nav", { class: "tabs" })
  const viewHost = el("main", { class: "view" })
  root.append(el("header", { class: "topbar" }, [title, modelSelect, tabs]), viewHost)

  const buttons = new Map<ViewName, HTMLButtonElement>()

  function show(view: ViewName): void {
    state.view = view
    for (const [name, button] of buttons) {
      button.classList.toggle("active", name === view)
    }
    clear(viewHost)
    switch (view) {
      case "cascade": {
        const cascade = new CascadeView(api, state, currentDoc)
        viewHost.append(cascade.root)
        void cascade.refresh()
        break
      }
      case "grid":
        viewHost.append(new GridView(api, currentDoc).root)
        break
      case "tornado":
        viewHost.append(new TornadoView(api, state, currentDoc).root)
        break
      case "hazard":
        viewHost.append(new HazardView(api).root)
        break
      case "scenarios":
        viewHost.append(new ScenariosView(api, state).root)
        break
    }
  }

  for (const name of VIEWS) {
    const button = el("button", {}, [name])
    button.addEventListener("click", () => show(name))
    buttons.set(name, button)
    tabs.append(button)
  }

  modelSelect.addEventListener("change", () => {
    void (async () => {
      state.activeModel = modelSelect.value
      state.overrides = {}
      state.lastReport = null
      currentDoc = await api.getModel(state.activeModel)
      show(state.view)
    })()
  })

  show("cascade")
}

const appRoot = document.getElementById("app")
if (appRoot) {
  void boot(appRoot)
}
