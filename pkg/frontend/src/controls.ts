/**
 * Control panels: clustering step slider, preference weights, CSM /
 * release-split / non-conflict toggles, stem type filter, keyword filters
 * and search. Every change reports a new ViewState; nothing is computed
 * client-side.
 */

import {
  KeywordFilter,
  KwCriterion,
  KwMode,
  SLIDER_STEPS,
  STEM_TYPES,
  ViewState,
} from "./state.js";

export interface ControlCallbacks {
  onChange: (next: ViewState) => void;
}

function labeled(text: string, input: HTMLElement): HTMLLabelElement {
  const label = document.createElement("label");
  label.className = "ctl";
  const span = document.createElement("span");
  span.textContent = text;
  label.append(span, input);
  return label;
}

export function renderControls(
  container: HTMLElement,
  state: ViewState,
  cb: ControlCallbacks,
): void {
  container.textContent = "";
  const emit = (mutate: (s: ViewState) => void) => {
    const next: ViewState = structuredClone(state);
    mutate(next);
    cb.onChange(next);
  };

  // clustering step slider: up = granular
  const sliderWrap = document.createElement("div");
  sliderWrap.className = "panel slider-panel";
  const slider = document.createElement("input");
  slider.type = "range";
  slider.id = "cluster-step";
  slider.min = "0";
  slider.max = String(SLIDER_STEPS - 1);
  slider.step = "1";
  slider.value = String(state.step);
  slider.addEventListener("change", () => emit((s) => (s.step = Number(slider.value))));
  const sliderLabel = document.createElement("div");
  sliderLabel.className = "ctl-caption";
  sliderLabel.textContent = `Clustering step ${state.step} (threshold ${(1 - state.step / (SLIDER_STEPS - 1)).toFixed(2)})`;
  sliderWrap.append(sliderLabel, slider);
  container.appendChild(sliderWrap);

  // preference weights
  const weightsWrap = document.createElement("div");
  weightsWrap.className = "panel weights-panel";
  const caption = document.createElement("div");
  caption.className = "ctl-caption";
  caption.textContent = "Preference weights";
  weightsWrap.appendChild(caption);
  for (const key of ["author", "date", "type", "file", "message"] as const) {
    const input = document.createElement("input");
    input.type = "number";
    input.min = "0";
    input.step = "0.5";
    input.value = String(state.weights[key]);
    input.addEventListener("change", () =>
      emit((s) => (s.weights[key] = Math.max(0, Number(input.value) || 0))),
    );
    weightsWrap.appendChild(labeled(key, input));
  }
  container.appendChild(weightsWrap);

  // toggles
  const toggles = document.createElement("div");
  toggles.className = "panel toggles-panel";
  const mkToggle = (text: string, id: string, value: boolean, apply: (s: ViewState, v: boolean) => void) => {
    const box = document.createElement("input");
    box.type = "checkbox";
    box.id = id;
    box.checked = value;
    box.addEventListener("change", () => emit((s) => apply(s, box.checked)));
    toggles.appendChild(labeled(text, box));
  };
  mkToggle("squash merges (CSM)", "toggle-csm", state.csm, (s, v) => (s.csm = v));
  mkToggle("split at releases", "toggle-release", state.releaseSplit, (s, v) => (s.releaseSplit = v));
  mkToggle("non-conflict clustering", "toggle-nonconflict", state.nonConflict, (s, v) => (s.nonConflict = v));
  container.appendChild(toggles);

  // stem type filter
  const stems = document.createElement("div");
  stems.className = "panel stemtypes-panel";
  const stemCaption = document.createElement("div");
  stemCaption.className = "ctl-caption";
  stemCaption.textContent = "Stem types";
  stems.appendChild(stemCaption);
  const visible = new Set(state.stemTypes ?? STEM_TYPES);
  for (const type of STEM_TYPES) {
    const box = document.createElement("input");
    box.type = "checkbox";
    box.checked = visible.has(type);
    box.addEventListener("change", () =>
      emit((s) => {
        const current = new Set(s.stemTypes ?? STEM_TYPES);
        if (box.checked) current.add(type);
        else current.delete(type);
        s.stemTypes = current.size === STEM_TYPES.length ? null : [...STEM_TYPES].filter((t) => current.has(t));
      }),
    );
    stems.appendChild(labeled(type, box));
  }
  container.appendChild(stems);

  // keyword filters
  const kw = document.createElement("div");
  kw.className = "panel kw-panel";
  const kwCaption = document.createElement("div");
  kwCaption.className = "ctl-caption";
  kwCaption.textContent = "Keyword filter";
  kw.appendChild(kwCaption);
  for (const [index, filter] of state.kwFilters.entries()) {
    const chip = document.createElement("span");
    chip.className = "kw-chip";
    chip.textContent = `${filter.mode === "include" ? "+" : "−"}${filter.criterion}:${filter.text}`;
    const remove = document.createElement("button");
    remove.textContent = "×";
    remove.addEventListener("click", () => emit((s) => s.kwFilters.splice(index, 1)));
    chip.appendChild(remove);
    kw.appendChild(chip);
  }
  const criterion = document.createElement("select");
  for (const c of ["author", "type", "file", "message"]) {
    const opt = document.createElement("option");
    opt.value = c;
    opt.textContent = c;
    criterion.appendChild(opt);
  }
  const mode = document.createElement("select");
  for (const m of ["include", "exclude"]) {
    const opt = document.createElement("option");
    opt.value = m;
    opt.textContent = m;
    mode.appendChild(opt);
  }
  const text = document.createElement("input");
  text.type = "text";
  text.placeholder = "keyword…";
  const add = document.createElement("button");
  add.textContent = "add";
  add.addEventListener("click", () => {
    if (!text.value.trim()) return;
    const filter: KeywordFilter = {
      criterion: criterion.value as KwCriterion,
      mode: mode.value as KwMode,
      text: text.value.trim(),
    };
    emit((s) => s.kwFilters.push(filter));
  });
  kw.append(criterion, mode, text, add);
  container.appendChild(kw);

  // search
  const searchWrap = document.createElement("div");
  searchWrap.className = "panel search-panel";
  const searchCaption = document.createElement("div");
  searchCaption.className = "ctl-caption";
  searchCaption.textContent = "Search & highlight";
  searchWrap.appendChild(searchCaption);
  for (const [index, query] of state.searchQueries.entries()) {
    const chip = document.createElement("span");
    chip.className = "search-chip";
    chip.textContent = query;
    const remove = document.createElement("button");
    remove.textContent = "×";
    remove.addEventListener("click", () => emit((s) => s.searchQueries.splice(index, 1)));
    chip.appendChild(remove);
    searchWrap.appendChild(chip);
  }
  const searchInput = document.createElement("input");
  searchInput.type = "search";
  searchInput.id = "search-input";
  searchInput.placeholder = "id, author, file, branch, tag, message…";
  const submit = () => {
    const value = searchInput.value.trim();
    if (value) emit((s) => s.searchQueries.push(value));
  };
  searchInput.addEventListener("keydown", (ev) => {
    if (ev.key === "Enter") submit();
  });
  const searchBtn = document.createElement("button");
  searchBtn.textContent = "highlight";
  searchBtn.addEventListener("click", submit);
  searchWrap.append(searchInput, searchBtn);
  container.appendChild(searchWrap);
}
