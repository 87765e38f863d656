"""Read-only sense search service.

Exposes the sense inventory, sense-filtered sentence search over the
tagged corpus, and embedding neighbors. All state is loaded once at
startup and never mutated, so handlers are trivially concurrent and
identical requests always return identical responses.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .artifacts import Artifacts, load_artifacts
from .embeddings import OovError
from .tagging import Assignment


def _sense_occurrences(artifacts: Artifacts) -> dict[tuple[int, int], list[Assignment]]:
    by_sense: dict[tuple[int, int], list[Assignment]] = {}
    for pos in sorted(artifacts.sidecar):
        a = artifacts.sidecar[pos]
        by_sense.setdefault((a.lemma, a.sense), []).append(a)
    return by_sense


def _sentence_text(artifacts: Artifacts, doc: int, sent: int) -> str:
    return " ".join(artifacts.sentences.get(doc, sent))


def create_app(artifacts: Artifacts, static_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="subsense search", docs_url=None, redoc_url=None)
    occurrences = _sense_occurrences(artifacts)
    vocab = artifacts.vocab

    def error(status: int, code: str, message: str) -> HTTPException:
        return HTTPException(status_code=status, detail={"code": code, "message": message})

    @app.get("/api/health")
    def health() -> dict:
        return {"status": "ok", "artifacts": artifacts.hashes}

    @app.get("/api/senses/{word}")
    def senses(word: str) -> dict:
        lemma = vocab.get(word)
        if lemma is None:
            raise error(404, "unknown_word", f"{word!r} is not in the vocabulary")
        clusters = artifacts.inventory.get(lemma)
        if not clusters:
            raise error(404, "no_senses", f"{word!r} has no induced senses")
        payload = []
        for c in clusters:
            occ = occurrences.get((lemma, c.sense_id), [])
            examples = [_sentence_text(artifacts, a.doc_id, a.sent_idx) for a in occ[:3]]
            payload.append(
                {
                    "lemma": word,
                    "sense": c.sense_id,
                    "representatives": [vocab.lemma_of(r) for r in c.representatives[:10]],
                    "support": c.support,
                    "examples": examples,
                }
            )
        return {"word": word, "senses": payload}

    @app.get("/api/search")
    def search(
        word: str,
        sense: int = Query(ge=0),
        limit: int = Query(default=10, ge=0, le=1000),
        offset: int = Query(default=0, ge=0),
        confident: bool = False,
    ) -> dict:
        lemma = vocab.get(word)
        if lemma is None:
            raise error(404, "unknown_word", f"{word!r} is not in the vocabulary")
        occ = occurrences.get((lemma, sense), [])
        if confident:
            occ = [a for a in occ if a.confident]
        hits = [
            {
                "doc": a.doc_id,
                "sent": a.sent_idx,
                "token_idx": a.token_idx,
                "text": _sentence_text(artifacts, a.doc_id, a.sent_idx),
            }
            for a in occ[offset : offset + limit]
        ]
        return {"total": len(occ), "hits": hits}

    @app.get("/api/neighbors")
    def neighbors(token: str, k: int = Query(default=10, ge=0, le=100), tagged_only: bool = False) -> list:
        if artifacts.embeddings is None:
            raise error(503, "no_embeddings", "embeddings artifact not loaded")
        try:
            ranked = artifacts.embeddings.nearest_neighbors(token, k, tagged_only=tagged_only)
        except OovError:
            raise error(404, "unknown_token", f"{token!r} is not in the embedding vocabulary")
        return [{"token": t, "cosine": c} for t, c in ranked]

    @app.exception_handler(HTTPException)
    async def on_http_error(_, exc: HTTPException):
        detail = exc.detail if isinstance(exc.detail, dict) else {"code": "error", "message": str(exc.detail)}
        return JSONResponse(status_code=exc.status_code, content={"error": detail})

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")
    return app


def serve(
    directory: str | Path,
    host: str = "127.0.0.1",
    port: int = 8000,
    static_dir: str | Path | None = None,
) -> None:
    """Load artifacts (failing fast on vocab mismatch) and run uvicorn."""
    import uvicorn

    artifacts = load_artifacts(directory)
    app = create_app(artifacts, static_dir=static_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")
