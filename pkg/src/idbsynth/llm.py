"""Chat-completion client for record generation at scale.

Talks to any OpenAI-style chat endpoint (POST {base}/v1/chat/completions)
with exponential-backoff retries, or replays recorded fixtures from disk
so the whole pipeline runs offline. Fixture lookup is keyed by a hash of
the canonical request, so replay is bit-exact.

Environment: LLM_BASE_URL, LLM_API_KEY, LLM_MODEL.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import httpx

from .errors import (
    EndpointUnreachable,
    MalformedApiResponse,
    MissingPlaceholder,
    RateLimitedExhausted,
)
from .records import DocumentKind

DEFAULT_MODEL = "llama-70b"
DEFAULT_TEMPERATURE = 0.9
DEFAULT_MAX_TOKENS = 512

ENV_BASE_URL = "LLM_BASE_URL"
ENV_API_KEY = "LLM_API_KEY"
ENV_MODEL = "LLM_MODEL"

_SEPARATOR_PHRASE = "separated by |"


@dataclass(frozen=True)
class PromptTemplate:
    kind: DocumentKind
    template_text: str

    def validate(self) -> None:
        for placeholder in ("{issuer}", "{country}"):
            if self.template_text.count(placeholder) != 1:
                raise MissingPlaceholder(
                    f"template must contain {placeholder} exactly once")
        if _SEPARATOR_PHRASE not in self.template_text:
            raise MissingPlaceholder(
                f"template must state the {_SEPARATOR_PHRASE!r} contract")


_DL_KEYS = ("family_name, first_name, address_street, address_city, "
            "address_state, address_postal, date_of_birth, license_number, "
            "issue_date, expiry_date, issuing_state, country")
_INS_KEYS = ("member_name, policy_number, provider, plan_type, "
             "coverage_start, coverage_end, group_number, country")
_UNI_KEYS = ("student_name, student_id, department, enrollment_year, "
             "university, degree_level, country")

DEFAULT_TEMPLATES: dict[DocumentKind, PromptTemplate] = {
    DocumentKind.DRIVER_LICENSE: PromptTemplate(
        DocumentKind.DRIVER_LICENSE,
        "Generate one fictional driver's license record for the state "
        "{issuer}, country {country}. Reply with a single line of plain-text "
        "fields separated by | where every field is written as key: value. "
        f"Use exactly these keys: {_DL_KEYS}. Dates are YYYY-MM-DD. The "
        "license number must follow that state's format. The person and all "
        "values must be entirely fictional yet realistic for the region, "
        "with culturally varied names."),
    DocumentKind.INSURANCE_CARD: PromptTemplate(
        DocumentKind.INSURANCE_CARD,
        "Generate one fictional insurance card record issued by {issuer}, "
        "country {country}. Reply with a single line of plain-text fields "
        "separated by | where every field is written as key: value. Use "
        f"exactly these keys: {_INS_KEYS}. Dates are YYYY-MM-DD. All values "
        "must be fictional yet consistent with that company's conventions."),
    DocumentKind.UNIVERSITY_ID: PromptTemplate(
        DocumentKind.UNIVERSITY_ID,
        "Generate one fictional student ID record issued by {issuer}, "
        "country {country}. Reply with a single line of plain-text fields "
        "separated by | where every field is written as key: value. Use "
        f"exactly these keys: {_UNI_KEYS}. All values must be fictional yet "
        "realistic for that institution."),
}


def render_prompt(template: PromptTemplate, issuer: str, country: str) -> str:
    """Substitute the two placeholders; all other text is untouched."""
    if not issuer or not country:
        raise ValueError("issuer and country must be non-empty")
    template.validate()
    return (template.template_text
            .replace("{issuer}", issuer)
            .replace("{country}", country))


@dataclass(frozen=True)
class LlmRequest:
    model_name: str
    prompt: str
    temperature: float = DEFAULT_TEMPERATURE
    max_tokens: int = DEFAULT_MAX_TOKENS

    def __post_init__(self):
        if not self.prompt:
            raise ValueError("prompt must be non-empty")
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError(f"temperature {self.temperature} outside [0, 2]")


@dataclass
class LlmResponse:
    text: str
    latency_ms: int
    attempt: int


@dataclass(frozen=True)
class RetryPolicy:
    base_delay_ms: int = 500
    factor: float = 2.0
    max_attempts: int = 5


def request_hash(request: LlmRequest) -> str:
    canonical = json.dumps(
        {"model": request.model_name, "prompt": request.prompt,
         "temperature": request.temperature, "max_tokens": request.max_tokens},
        sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


class FixtureStore:
    """On-disk recorded responses: index.json maps request hash -> fixture id,
    one <fixture id>.txt per response."""

    INDEX_NAME = "index.json"

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        index_path = self.directory / self.INDEX_NAME
        if not index_path.is_file():
            raise EndpointUnreachable(f"no fixture index at {index_path}")
        self.index: dict[str, str] = json.loads(index_path.read_text())

    @classmethod
    def bundled(cls) -> "FixtureStore":
        return cls(resources.files("idbsynth.data").joinpath("fixtures"))

    def lookup(self, request: LlmRequest) -> str:
        key = request_hash(request)
        fixture_id = self.index.get(key)
        if fixture_id is None:
            raise EndpointUnreachable(
                f"no recorded fixture for request hash {key[:12]}...")
        return (self.directory / f"{fixture_id}.txt").read_text(encoding="utf-8")

    def record(self, request: LlmRequest, fixture_id: str, text: str) -> None:
        (self.directory / f"{fixture_id}.txt").write_text(text, encoding="utf-8")
        self.index[request_hash(request)] = fixture_id
        (self.directory / self.INDEX_NAME).write_text(
            json.dumps(self.index, indent=2, sort_keys=True) + "\n")


class LlmClient:
    """Thread-safe client; per-request retry state, shared read-only config."""

    def __init__(self, base_url: str | None = None, api_key: str | None = None,
                 model: str | None = None, replay: FixtureStore | None = None,
                 sleep=time.sleep, transport: httpx.BaseTransport | None = None):
        self.replay = replay
        self.base_url = base_url if base_url is not None else os.environ.get(ENV_BASE_URL)
        self.api_key = api_key if api_key is not None else os.environ.get(ENV_API_KEY)
        self.model = model or os.environ.get(ENV_MODEL, DEFAULT_MODEL)
        self._sleep = sleep
        self._transport = transport
        if self.replay is None and not self.base_url:
            raise EndpointUnreachable(
                f"no {ENV_BASE_URL} configured and no replay fixtures supplied")

    def complete(self, request: LlmRequest,
                 policy: RetryPolicy = RetryPolicy()) -> LlmResponse:
        if self.replay is not None:
            return LlmResponse(text=self.replay.lookup(request), latency_ms=0, attempt=1)

        url = self.base_url.rstrip("/") + "/v1/chat/completions"
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        body = {
            "model": request.model_name,
            "messages": [{"role": "user", "content": request.prompt}],
            "temperature": request.temperature,
            "max_tokens": request.max_tokens,
        }

        last_rate_limited = False
        started = time.monotonic()
        with httpx.Client(transport=self._transport, timeout=30.0) as client:
            for attempt in range(1, policy.max_attempts + 1):
                try:
                    resp = client.post(url, json=body, headers=headers)
                except httpx.HTTPError:
                    last_rate_limited = False
                    resp = None
                if resp is not None:
                    if resp.status_code == 200:
                        try:
                            text = resp.json()["choices"][0]["message"]["content"]
                        except (KeyError, IndexError, TypeError, ValueError) as exc:
                            raise MalformedApiResponse(
                                f"unexpected completion body: {exc}") from exc
                        latency = int((time.monotonic() - started) * 1000)
                        return LlmResponse(text=text, latency_ms=latency, attempt=attempt)
                    if resp.status_code == 429:
                        last_rate_limited = True
                    elif 500 <= resp.status_code < 600:
                        last_rate_limited = False
                    else:
                        raise MalformedApiResponse(
                            f"endpoint returned HTTP {resp.status_code}")
                if attempt < policy.max_attempts:
                    delay_ms = policy.base_delay_ms * (policy.factor ** (attempt - 1))
                    self._sleep(delay_ms / 1000.0)
        if last_rate_limited:
            raise RateLimitedExhausted(
                f"rate-limited on all {policy.max_attempts} attempts")
        raise EndpointUnreachable(
            f"no successful response after {policy.max_attempts} attempts")

    def batch_generate(self, kind: DocumentKind,
                       issuers: list[tuple[str, str]], per_issuer: int,
                       parallelism: int = 4,
                       policy: RetryPolicy = RetryPolicy(),
                       templates: dict[DocumentKind, PromptTemplate] | None = None,
                       ) -> list[str]:
        """Response texts ordered by (issuer index, sample index)."""
        if parallelism < 1:
            raise ValueError(f"parallelism must be >= 1, got {parallelism}")
        if per_issuer < 1:
            raise ValueError(f"per_issuer must be >= 1, got {per_issuer}")
        template = (templates or DEFAULT_TEMPLATES)[kind]
        jobs = []
        for issuer, country in issuers:
            prompt = render_prompt(template, issuer, country)
            request = LlmRequest(model_name=self.model, prompt=prompt)
            jobs.extend((issuer, request) for _ in range(per_issuer))

        def run(job):
            issuer, request = job
            try:
                return self.complete(request, policy).text
            except Exception as exc:
                exc.args = (f"issuer {issuer!r}: {exc}",) + exc.args[1:]
                raise

        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            return list(pool.map(run, jobs))
