"""HTTP/JSON service backing the browser annotator."""

import json
from importlib import resources

from fastapi import FastAPI, Header, Request
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles

from .agreement import agreement_report, build_matrix, cohen_kappa, fleiss_kappa, latest_records
from .errors import Conflict, InsufficientOverlap, LabelError, NotFound
from .zones import ZONES


def load_guidelines():
    text = resources.files("zoner.data").joinpath("guidelines.json").read_text("utf-8")
    return json.loads(text)


def _pairwise(records, a, b):
    latest = latest_records(records)
    shared = {}
    for rec in latest.values():
        if rec.annotator in (a, b):
            shared.setdefault((rec.doc_id, rec.sentence_idx), {})[rec.annotator] = rec.label
    items = sorted(item for item, labels in shared.items() if len(labels) == 2)
    if not items:
        raise InsufficientOverlap(f"no items shared by {a!r} and {b!r}")
    labels_a = [shared[item][a] for item in items]
    labels_b = [shared[item][b] for item in items]
    return cohen_kappa(labels_a, labels_b), len(items)


def create_app(corpus, store, static_dir=None):
    app = FastAPI(title="zoner annotation service")
    guidelines = load_guidelines()

    @app.exception_handler(NotFound)
    async def _not_found(request, exc):
        return JSONResponse(status_code=404, content={"error": str(exc)})

    @app.exception_handler(LabelError)
    async def _label_error(request, exc):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.exception_handler(Conflict)
    async def _conflict(request, exc):
        current = exc.current.to_dict() if exc.current else None
        return JSONResponse(
            status_code=409, content={"error": str(exc), "current": current}
        )

    @app.get("/api/docs")
    def list_docs(x_annotator: str = Header("anonymous")):
        return {"documents": store.list_documents(x_annotator)}

    @app.get("/api/docs/{doc_id}")
    def get_doc(doc_id: str, x_annotator: str = Header("anonymous")):
        return store.document_view(doc_id, x_annotator)

    @app.post("/api/docs/{doc_id}/labels")
    async def submit_label(doc_id: str, request: Request,
                           x_annotator: str = Header("anonymous")):
        body = await request.json()
        record = store.submit(
            doc_id=doc_id,
            sentence_idx=int(body["sentence_idx"]),
            annotator=x_annotator,
            label=body["label"],
            rev=int(body["rev"]),
        )
        return record.to_dict()

    @app.get("/api/agreement")
    def agreement(annotators: str | None = None):
        records = store.records()
        try:
            if annotators:
                names = [a.strip() for a in annotators.split(",") if a.strip()]
                if len(names) != 2:
                    return JSONResponse(
                        status_code=400,
                        content={"error": "annotators must name exactly two annotators"},
                    )
                kappa, n_items = _pairwise(records, names[0], names[1])
                return {"pairwise": {f"{names[0]}|{names[1]}": kappa},
                        "n_items": n_items}
            report = agreement_report(records, corpus)
            return report.to_dict()
        except InsufficientOverlap as exc:
            return {"insufficient_overlap": True, "reason": str(exc)}

    @app.get("/api/agreement/fleiss")
    def fleiss():
        try:
            matrix = build_matrix(store.records())
            return {"fleiss": fleiss_kappa(matrix), "n_items": len(matrix.items),
                    "n_annotators": matrix.n}
        except InsufficientOverlap as exc:
            return {"insufficient_overlap": True, "reason": str(exc)}

    @app.get("/api/guidelines")
    def get_guidelines():
        return guidelines

    @app.get("/api/export")
    def export():
        lines = "".join(json.dumps(r.to_dict()) + "\n" for r in store.export())
        return PlainTextResponse(lines, media_type="application/x-ndjson")

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
