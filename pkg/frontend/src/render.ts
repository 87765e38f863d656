/** DOM rendering for the sense popup and the result list. All content
 * comes from API payloads; this module never invents sense data. */

import { SearchResponse, SenseSummary } from "./api.js";

export const PAGE_SIZE = 10;

export function renderPopup(
    container: HTMLElement,
    word: string,
    senses: SenseSummary[],
    onChoose: (sense: number) => void,
): void {
    container.innerHTML = "";
    container.classList.add("open");
    const list = document.createElement("ul");
    list.className = "sense-list";
    list.setAttribute("role", "listbox");
    if (senses.length === 0) {
        const row = document.createElement("li");
        row.className = "sense-row empty";
        row.textContent = `no senses for "${word}"`;
        list.appendChild(row);
    }
    senses.forEach((sense, i) => {
        const row = document.createElement("li");
        row.className = "sense-row";
        row.tabIndex = 0;
        row.dataset.sense = String(sense.sense);
        row.setAttribute("role", "option");
        if (i === 0) row.classList.add("active");

        const head = document.createElement("div");
        head.className = "sense-head";
        head.textContent = `${word}@${sense.sense}`;
        const support = document.createElement("span");
        support.className = "sense-support";
        support.textContent = `${sense.support} uses`;
        head.appendChild(support);

        const reps = document.createElement("div");
        reps.className = "sense-reps";
        reps.textContent = sense.representatives.join(", ");

        row.append(head, reps);
        if (sense.examples.length > 0) {
            const example = document.createElement("div");
            example.className = "sense-example";
            example.textContent = sense.examples[0];
            row.appendChild(example);
        }
        row.addEventListener("click", () => onChoose(sense.sense));
        row.addEventListener("keydown", (ev) => {
            if (ev.key === "Enter") onChoose(sense.sense);
        });
        list.appendChild(row);
    });
    container.appendChild(list);
}

export function closePopup(container: HTMLElement): void {
    container.innerHTML = "";
    container.classList.remove("open");
}

/** Move the popup's active row and return the active sense id, if any. */
export function movePopupSelection(container: HTMLElement, delta: number): number | null {
    const rows = Array.from(container.querySelectorAll<HTMLElement>(".sense-row:not(.empty)"));
    if (rows.length === 0) return null;
    const current = rows.findIndex((r) => r.classList.contains("active"));
    const next = Math.min(rows.length - 1, Math.max(0, (current === -1 ? 0 : current) + delta));
    rows.forEach((r, i) => r.classList.toggle("active", i === next));
    return Number(rows[next].dataset.sense);
}

export function activePopupSense(container: HTMLElement): number | null {
    const active = container.querySelector<HTMLElement>(".sense-row.active");
    return active ? Number(active.dataset.sense) : null;
}

function highlightedSentence(text: string, tokenIdx: number): HTMLElement {
    const line = document.createElement("div");
    line.className = "hit-text";
    const tokens = text.split(" ");
    tokens.forEach((tok, i) => {
        if (i > 0) line.appendChild(document.createTextNode(" "));
        if (i === tokenIdx) {
            const mark = document.createElement("mark");
            mark.className = "hit-target";
            mark.textContent = tok;
            line.appendChild(mark);
        } else {
            line.appendChild(document.createTextNode(tok));
        }
    });
    return line;
}

export function renderResults(
    container: HTMLElement,
    response: SearchResponse,
    page: number,
    onPage: (page: number) => void,
): void {
    container.innerHTML = "";
    const summary = document.createElement("div");
    summary.className = "result-summary";
    summary.textContent = response.total === 0
        ? "no matching sentences"
        : `${response.total} matching sentences`;
    container.appendChild(summary);

    const list = document.createElement("ol");
    list.className = "hit-list";
    list.start = page * PAGE_SIZE + 1;
    for (const hit of response.hits) {
        const item = document.createElement("li");
        item.className = "hit";
        item.dataset.doc = String(hit.doc);
        item.dataset.sent = String(hit.sent);
        item.appendChild(highlightedSentence(hit.text, hit.token_idx));
        list.appendChild(item);
    }
    container.appendChild(list);

    const pager = document.createElement("div");
    pager.className = "pager";
    const prev = document.createElement("button");
    prev.textContent = "previous";
    prev.className = "page-prev";
    prev.disabled = page === 0;
    prev.addEventListener("click", () => onPage(page - 1));
    const next = document.createElement("button");
    next.textContent = "next";
    next.className = "page-next";
    next.disabled = (page + 1) * PAGE_SIZE >= response.total;
    next.addEventListener("click", () => onPage(page + 1));
    if (response.total > PAGE_SIZE) pager.append(prev, next);
    container.appendChild(pager);
}

export function renderError(container: HTMLElement, message: string, onRetry: () => void): void {
    container.innerHTML = "";
    const banner = document.createElement("div");
    banner.className = "error-banner";
    banner.textContent = message + " ";
    const retry = document.createElement("button");
    retry.textContent = "retry";
    retry.className = "retry";
    retry.addEventListener("click", onRetry);
    banner.appendChild(retry);
    container.appendChild(banner);
}
