"""HTTP API over the equivalence engine.

Every endpoint is a pure function of its request body, so the service is
safe to scale out.  Datasets arrive either as the canonical JSON object or
as CSV text plus a field/dim declaration; all scalar values travel as
interchange-format strings.

Run with: uvicorn mapequiv.service:app
"""

from __future__ import annotations

from typing import Literal, Optional, Union

from fastapi import FastAPI
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field, model_validator

from . import __version__
from .errors import MapequivError
from .fields import FieldSpec
from .groups import GroupSpec
from .samplemap import SampleKey, SampleMap, parse_dataset_csv, parse_dataset_json
from .signature import compute_signature, reconstruct_canonical, signature_to_json
from .equivalence import decide, decision_to_json
from .invariants import check_algebraic_independence, evaluate_generators, generator_count
from .oracle import brute_force_equivalent
from .samplemap import select_base_points

GroupName = Literal["gl", "sl", "aff-gl", "aff-sl"]


class SampleRecord(BaseModel):
    s: Optional[str] = None
    t: str
    value: list[str]


class DatasetBody(BaseModel):
    field: Union[str, dict]
    n: int
    samples: list[SampleRecord]


class DatasetIn(BaseModel):
    """One dataset: canonical JSON object, or CSV text with field/dim flags."""

    dataset: Optional[DatasetBody] = None
    csv: Optional[str] = None
    field: Optional[str] = Field(None, description="CSV only: rational | prime:P | approx:EPS")
    dim: Optional[int] = Field(None, description="CSV only: vector dimension")

    @model_validator(mode="after")
    def _exactly_one_form(self):
        if (self.dataset is None) == (self.csv is None):
            raise ValueError("provide exactly one of 'dataset' or 'csv'")
        if self.csv is not None and (self.field is None or self.dim is None):
            raise ValueError("'csv' needs 'field' and 'dim'")
        return self


class RankRequest(BaseModel):
    dataset: DatasetIn


class RankResponse(BaseModel):
    rank: int


class SignatureRequest(BaseModel):
    dataset: DatasetIn
    base: Optional[list[str]] = None


class CanonicalRequest(BaseModel):
    dataset: DatasetIn
    group: GroupName = "gl"
    base: Optional[list[str]] = None


class EquivRequest(BaseModel):
    left: DatasetIn
    right: DatasetIn
    group: GroupName = "gl"
    base: Optional[list[str]] = None
    anchor: Optional[str] = None
    oracle: bool = False


class WitnessBody(BaseModel):
    g: list[list[str]]
    translation: Optional[list[str]] = None


class OracleBody(BaseModel):
    equivalent: bool
    agrees: bool


class EquivResponse(BaseModel):
    equivalent: bool
    reason: str
    witness: Optional[WitnessBody] = None
    oracle: Optional[OracleBody] = None


class InvariantsRequest(BaseModel):
    dataset: DatasetIn
    group: GroupName = "gl"
    base: Optional[list[str]] = None


class GeneratorValue(BaseModel):
    label: str
    value: str


class InvariantsResponse(BaseModel):
    generators: list[GeneratorValue]


class IndependenceRequest(BaseModel):
    n: int
    k: int
    m: int
    group: Literal["gl", "sl"] = "gl"
    seed: int = 0


class IndependenceResponse(BaseModel):
    independent: bool
    generator_count: int


app = FastAPI(title="mapequiv", version=__version__)


@app.exception_handler(MapequivError)
async def _data_error(request, exc: MapequivError):
    return JSONResponse(status_code=400, content={"detail": str(exc)})


def _load(ds: DatasetIn) -> SampleMap:
    if ds.dataset is not None:
        return parse_dataset_json(ds.dataset.model_dump(exclude_none=True))
    return parse_dataset_csv(ds.csv, FieldSpec.from_text(ds.field), ds.dim)


def _base_keys(labels: Optional[list[str]]):
    if labels is None:
        return None
    return [SampleKey.from_label(text) for text in labels]


@app.get("/health")
def health():
    return {"status": "ok", "version": __version__}


@app.post("/rank", response_model=RankResponse)
def rank(req: RankRequest):
    return RankResponse(rank=_load(req.dataset).rank())


@app.post("/signature")
def signature(req: SignatureRequest):
    smap = _load(req.dataset)
    base = select_base_points(smap, _base_keys(req.base))
    return signature_to_json(compute_signature(smap, base))


@app.post("/canonical")
def canonical(req: CanonicalRequest):
    smap = _load(req.dataset)
    group = GroupSpec.from_name(req.group)
    base = select_base_points(smap, _base_keys(req.base))
    sig = compute_signature(smap, base)
    return reconstruct_canonical(sig, smap.n, group).to_json()


@app.post("/equiv", response_model=EquivResponse)
def equiv(req: EquivRequest):
    u, v = _load(req.left), _load(req.right)
    group = GroupSpec.from_name(req.group)
    anchor = SampleKey.from_label(req.anchor) if req.anchor is not None else None
    decision = decide(u, v, group, base_keys=_base_keys(req.base), anchor=anchor)
    report = decision_to_json(decision)
    oracle = None
    if req.oracle:
        verdict = brute_force_equivalent(u, v, group)
        oracle = OracleBody(equivalent=verdict, agrees=verdict == decision.equivalent)
    return EquivResponse(
        equivalent=report["equivalent"],
        reason=report["reason"],
        witness=WitnessBody(**report["witness"]) if report["witness"] else None,
        oracle=oracle,
    )


@app.post("/invariants", response_model=InvariantsResponse)
def invariants(req: InvariantsRequest):
    smap = _load(req.dataset)
    group = GroupSpec.from_name(req.group)
    values = evaluate_generators(smap, group, base_keys=_base_keys(req.base))
    f = smap.field
    return InvariantsResponse(generators=[
        GeneratorValue(label=label, value=f.format(value)) for label, value in values])


@app.post("/independence", response_model=IndependenceResponse)
def independence(req: IndependenceRequest):
    group = GroupSpec.from_name(req.group)
    verdict = check_algebraic_independence(req.n, req.k, req.m, group, req.seed)
    return IndependenceResponse(
        independent=verdict,
        generator_count=generator_count(req.n, req.k, req.m, group))
