/** Typed client for the sense search JSON API. */

export interface SenseSummary {
    lemma: string;
    sense: number;
    representatives: string[];
    support: number;
    examples: string[];
}

export interface SensesResponse {
    word: string;
    senses: SenseSummary[];
}

export interface SearchHit {
    doc: number;
    sent: number;
    token_idx: number;
    text: string;
}

export interface SearchResponse {
    total: number;
    hits: SearchHit[];
}

export class ApiError extends Error {
    constructor(public status: number, public code: string, message: string) {
        super(message);
    }
}

async function getJson<T>(url: string): Promise<T> {
    const resp = await fetch(url);
    if (!resp.ok) {
        let code = "http_error";
        let message = `HTTP ${resp.status}`;
        try {
            const body = await resp.json();
            if (body && body.error) {
                code = body.error.code ?? code;
                message = body.error.message ?? message;
            }
        } catch {
            // non-JSON error body; keep defaults
        }
        throw new ApiError(resp.status, code, message);
    }
    return resp.json() as Promise<T>;
}

export class ApiClient {
    constructor(private base: string = "") {}

    senses(word: string): Promise<SensesResponse> {
        return getJson(`${this.base}/api/senses/${encodeURIComponent(word)}`);
    }

    search(
        word: string,
        sense: number,
        opts: { limit?: number; offset?: number; confident?: boolean } = {},
    ): Promise<SearchResponse> {
        const params = new URLSearchParams({ word, sense: String(sense) });
        params.set("limit", String(opts.limit ?? 10));
        params.set("offset", String(opts.offset ?? 0));
        if (opts.confident) params.set("confident", "true");
        return getJson(`${this.base}/api/search?${params.toString()}`);
    }
}
