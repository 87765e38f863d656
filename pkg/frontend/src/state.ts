/** Pure query-state logic: what the input text means, and whether a
 * response is still current. No DOM, no fetch. */

export interface ParsedQuery {
    /** word before the "@", if any */
    target: string | null;
    /** selected sense when the query is "word@<digits>" */
    sense: number | null;
    /** query ends with a bare "@": ask the API for senses and open the popup */
    trigger: boolean;
}

export function parseQuery(raw: string): ParsedQuery {
    const text = raw.trim();
    if (text === "" || text === "@") return { target: null, sense: null, trigger: false };
    const at = text.lastIndexOf("@");
    if (at === -1) return { target: text, sense: null, trigger: false };
    const word = text.slice(0, at);
    const suffix = text.slice(at + 1);
    if (word === "") return { target: null, sense: null, trigger: false };
    if (suffix === "") return { target: word, sense: null, trigger: true };
    if (/^\d+$/.test(suffix)) return { target: word, sense: Number(suffix), trigger: false };
    return { target: text, sense: null, trigger: false };
}

export interface UiQueryState {
    raw: string;
    target: string | null;
    popupOpen: boolean;
    selectedSense: number | null;
    page: number;
    confidentOnly: boolean;
}

export function initialState(): UiQueryState {
    return { raw: "", target: null, popupOpen: false, selectedSense: null, page: 0, confidentOnly: false };
}

/** State after the user edits the query text. Popup visibility is
 * provisional: it only stays open if the senses request succeeds. */
export function onQueryEdited(state: UiQueryState, raw: string): UiQueryState {
    const parsed = parseQuery(raw);
    return {
        ...state,
        raw,
        target: parsed.target,
        popupOpen: parsed.trigger,
        selectedSense: parsed.sense,
        page: 0,
    };
}

export function onSenseChosen(state: UiQueryState, sense: number): UiQueryState {
    const target = state.target ?? "";
    return {
        ...state,
        raw: `${target}@${sense}`,
        popupOpen: false,
        selectedSense: sense,
        page: 0,
    };
}

/** Serialize to the shareable URL form: /?q=word@k&page=n. */
export function toUrlParams(state: UiQueryState): string {
    const params = new URLSearchParams();
    if (state.raw) params.set("q", state.raw);
    if (state.page > 0) params.set("page", String(state.page));
    if (state.confidentOnly) params.set("confident", "1");
    return params.toString();
}

export function fromUrlParams(search: string): UiQueryState {
    const params = new URLSearchParams(search);
    const state = onQueryEdited(initialState(), params.get("q") ?? "");
    const page = Number(params.get("page") ?? "0");
    return {
        ...state,
        popupOpen: false,
        page: Number.isFinite(page) && page > 0 ? page : 0,
        confidentOnly: params.get("confident") === "1",
    };
}

/** Monotone counter so stale async responses can be discarded. */
export class RequestSequencer {
    private counter = 0;

    next(): number {
        this.counter += 1;
        return this.counter;
    }

    isCurrent(token: number): boolean {
        return token === this.counter;
    }
}
