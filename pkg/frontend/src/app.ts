/** Application wiring: the search box, the "@" sense popup and the
 * sense-filtered result list, all backed by the JSON API. */

import { ApiClient, ApiError } from "./api.js";
import {
    activePopupSense,
    closePopup,
    movePopupSelection,
    PAGE_SIZE,
    renderError,
    renderPopup,
    renderResults,
} from "./render.js";
import {
    fromUrlParams,
    onQueryEdited,
    onSenseChosen,
    RequestSequencer,
    toUrlParams,
    UiQueryState,
} from "./state.js";

export interface AppHandles {
    input: HTMLInputElement;
    popup: HTMLElement;
    results: HTMLElement;
    confident: HTMLInputElement;
    state(): UiQueryState;
    /** resolves when no request started before the call is still in flight */
    settled(): Promise<void>;
}

export function bootstrap(root: Document, apiBase = "", pushUrl = true): AppHandles {
    const input = root.querySelector<HTMLInputElement>("#query")!;
    const popup = root.querySelector<HTMLElement>("#sense-popup")!;
    const results = root.querySelector<HTMLElement>("#results")!;
    const confident = root.querySelector<HTMLInputElement>("#confident-only")!;
    const api = new ApiClient(apiBase);
    const sequencer = new RequestSequencer();

    let state = fromUrlParams(root.defaultView?.location.search ?? "");
    let inflight: Promise<void> = Promise.resolve();

    function syncUrl(): void {
        if (!pushUrl || !root.defaultView) return;
        const qs = toUrlParams(state);
        root.defaultView.history.replaceState(null, "", qs ? `?${qs}` : "?");
    }

    function track(p: Promise<void>): void {
        inflight = inflight.then(() => p, () => p).then(() => undefined);
    }

    async function openSensePopup(word: string, token: number): Promise<void> {
        try {
            const response = await api.senses(word);
            if (!sequencer.isCurrent(token)) return; // stale: query changed since
            renderPopup(popup, word, response.senses, chooseSense);
        } catch (err) {
            if (!sequencer.isCurrent(token)) return;
            if (err instanceof ApiError && err.status === 404) {
                renderPopup(popup, word, [], chooseSense);
            } else {
                renderError(popup, "sense lookup failed", () => {
                    track(openSensePopup(word, sequencer.next()));
                });
            }
        }
    }

    async function runSearch(token: number): Promise<void> {
        const { target, selectedSense, page, confidentOnly } = state;
        if (target === null || selectedSense === null) return;
        try {
            const response = await api.search(target, selectedSense, {
                limit: PAGE_SIZE,
                offset: page * PAGE_SIZE,
                confident: confidentOnly,
            });
            if (!sequencer.isCurrent(token)) return;
            renderResults(results, response, page, (newPage) => {
                state = { ...state, page: newPage };
                syncUrl();
                track(runSearch(sequencer.next()));
            });
        } catch (err) {
            if (!sequencer.isCurrent(token)) return;
            const message = err instanceof ApiError ? `search failed: ${err.message}` : "search failed";
            renderError(results, message, () => track(runSearch(sequencer.next())));
        }
    }

    function chooseSense(sense: number): void {
        state = onSenseChosen(state, sense);
        input.value = state.raw;
        closePopup(popup);
        syncUrl();
        track(runSearch(sequencer.next()));
    }

    function handleEdit(): void {
        state = onQueryEdited(state, input.value);
        syncUrl();
        const token = sequencer.next();
        if (state.popupOpen && state.target) {
            track(openSensePopup(state.target, token));
        } else {
            closePopup(popup);
            if (state.target && state.selectedSense !== null) {
                track(runSearch(token));
            } else {
                results.innerHTML = "";
            }
        }
    }

    input.addEventListener("input", handleEdit);
    input.addEventListener("keydown", (ev) => {
        if (!popup.classList.contains("open")) return;
        if (ev.key === "ArrowDown") {
            movePopupSelection(popup, 1);
            ev.preventDefault();
        } else if (ev.key === "ArrowUp") {
            movePopupSelection(popup, -1);
            ev.preventDefault();
        } else if (ev.key === "Enter") {
            const sense = activePopupSense(popup);
            if (sense !== null) chooseSense(sense);
            ev.preventDefault();
        } else if (ev.key === "Escape") {
            closePopup(popup);
        }
    });
    confident.addEventListener("change", () => {
        state = { ...state, confidentOnly: confident.checked, page: 0 };
        syncUrl();
        if (state.selectedSense !== null) track(runSearch(sequencer.next()));
    });

    // Deep link: restore the query from the URL and run it.
    if (state.raw) {
        input.value = state.raw;
        confident.checked = state.confidentOnly;
        if (state.selectedSense !== null) track(runSearch(sequencer.next()));
    }

    return {
        input,
        popup,
        results,
        confident,
        state: () => state,
        settled: async () => {
            let prev;
            do {
                prev = inflight;
                await prev;
            } while (prev !== inflight);
        },
    };
}

declare global {
    interface Window {
        __subsenseApp?: AppHandles;
    }
}

// Auto-boot only in the served page (body carries the app marker); tests
// build their own DOM and call bootstrap() explicitly.
if (typeof document !== "undefined" && document.body?.dataset.app === "subsense") {
    window.__subsenseApp = bootstrap(document);
}
