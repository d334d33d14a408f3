"""Fictional identity-document records: schemas, generation, parsing.

Records are flat ordered field maps validated against a per-kind schema.
Two production paths exist: the deterministic template generator (seeded,
pool-backed) and the LLM response parser. Both must yield records that
pass validate_record; the `|` character is reserved as the corpus
serialization separator and banned from values.

Identifier patterns use a tiny template language: `L` is an uppercase
letter, `#` a digit, anything else literal. Issuer profiles (bundled
JSON, user-overridable) supply per-issuer patterns; `*` is the generic
fallback profile.
"""

from __future__ import annotations

import datetime as dt
import enum
import hashlib
import json
import random
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import FormatViolation, MalformedResponse, UnknownIssuer, UnknownKeyField

SEPARATOR = "|"


class DocumentKind(enum.Enum):
    DRIVER_LICENSE = "driver_license"
    INSURANCE_CARD = "insurance_card"
    UNIVERSITY_ID = "university_id"


@dataclass(frozen=True)
class RecordSchema:
    kind: DocumentKind
    required_fields: tuple[str, ...]
    optional_fields: tuple[str, ...]
    field_formats: dict[str, str]

    def __post_init__(self):
        overlap = set(self.required_fields) & set(self.optional_fields)
        if not self.required_fields or overlap:
            raise ValueError(f"bad schema for {self.kind}: overlap={overlap}")

    @property
    def all_fields(self) -> tuple[str, ...]:
        return self.required_fields + self.optional_fields


def _is_iso_date(value: str) -> bool:
    try:
        dt.date.fromisoformat(value)
        return True
    except ValueError:
        return False


_RULES: dict[str, object] = {
    "name": re.compile(r"^[A-Za-z][A-Za-z .'-]*$"),
    "street": re.compile(r"^\d+ [A-Za-z0-9 .'-]+$"),
    "city": re.compile(r"^[A-Za-z][A-Za-z .'-]*$"),
    "state_code": re.compile(r"^[A-Z]{2}$"),
    "zip5": re.compile(r"^\d{5}$"),
    "date": _is_iso_date,
    "id": re.compile(r"^[A-Z0-9][A-Z0-9-]{3,15}$"),
    "year": re.compile(r"^(19|20)\d{2}$"),
    "text": re.compile(r"^[A-Za-z0-9][A-Za-z0-9 .,'&-]*$"),
    "sex": re.compile(r"^[MFX]$"),
}


def _rule_ok(rule_id: str, value: str) -> bool:
    rule = _RULES[rule_id]
    if callable(rule):
        return rule(value)
    return rule.fullmatch(value) is not None


DRIVER_LICENSE_SCHEMA = RecordSchema(
    kind=DocumentKind.DRIVER_LICENSE,
    required_fields=(
        "family_name", "first_name", "address_street", "address_city",
        "address_state", "address_postal", "date_of_birth", "license_number",
        "issue_date", "expiry_date", "issuing_state", "country",
    ),
    optional_fields=("middle_name", "sex"),
    field_formats={
        "family_name": "name", "first_name": "name", "middle_name": "name",
        "address_street": "street", "address_city": "city",
        "address_state": "state_code", "address_postal": "zip5",
        "date_of_birth": "date", "issue_date": "date", "expiry_date": "date",
        "license_number": "id", "issuing_state": "text", "country": "text",
        "sex": "sex",
    },
)

INSURANCE_CARD_SCHEMA = RecordSchema(
    kind=DocumentKind.INSURANCE_CARD,
    required_fields=(
        "member_name", "policy_number", "provider", "plan_type",
        "coverage_start", "coverage_end",
    ),
    optional_fields=("group_number", "member_id", "country"),
    field_formats={
        "member_name": "name", "policy_number": "id", "provider": "text",
        "plan_type": "text", "coverage_start": "date", "coverage_end": "date",
        "group_number": "id", "member_id": "id", "country": "text",
    },
)

UNIVERSITY_ID_SCHEMA = RecordSchema(
    kind=DocumentKind.UNIVERSITY_ID,
    required_fields=(
        "student_name", "student_id", "department", "enrollment_year", "university",
    ),
    optional_fields=("degree_level", "country"),
    field_formats={
        "student_name": "name", "student_id": "id", "department": "text",
        "enrollment_year": "year", "university": "text", "degree_level": "text",
        "country": "text",
    },
)

SCHEMAS: dict[DocumentKind, RecordSchema] = {
    DocumentKind.DRIVER_LICENSE: DRIVER_LICENSE_SCHEMA,
    DocumentKind.INSURANCE_CARD: INSURANCE_CARD_SCHEMA,
    DocumentKind.UNIVERSITY_ID: UNIVERSITY_ID_SCHEMA,
}


class RecordSource(enum.Enum):
    LLM = "llm"
    TEMPLATE = "template"


@dataclass
class IdentityRecord:
    kind: DocumentKind
    fields: dict[str, str]
    issuer: str
    country: str
    source: RecordSource

    @classmethod
    def from_fields(cls, kind: DocumentKind, fields: dict[str, str],
                    source: RecordSource) -> "IdentityRecord":
        issuer_field = {
            DocumentKind.DRIVER_LICENSE: "issuing_state",
            DocumentKind.INSURANCE_CARD: "provider",
            DocumentKind.UNIVERSITY_ID: "university",
        }[kind]
        return cls(kind=kind, fields=dict(fields),
                   issuer=fields.get(issuer_field, ""),
                   country=fields.get("country", ""), source=source)


@dataclass
class ValidationReport:
    ok: bool
    violations: list[tuple[str, str, str]] = field(default_factory=list)


def validate_record(record: IdentityRecord) -> ValidationReport:
    """Check presence, format rules, the separator ban, and date sanity."""
    schema = SCHEMAS[record.kind]
    violations: list[tuple[str, str, str]] = []

    for name in schema.required_fields:
        if not record.fields.get(name):
            violations.append((name, "missing", "required field absent or empty"))
    for name, value in record.fields.items():
        if SEPARATOR in value:
            violations.append((name, "separator_ban",
                               f"value contains reserved {SEPARATOR!r}"))
        rule_id = schema.field_formats.get(name)
        if rule_id and value and not _rule_ok(rule_id, value):
            violations.append((name, "format",
                               f"value {value!r} fails rule {rule_id!r}"))

    def _date(name):
        v = record.fields.get(name, "")
        return dt.date.fromisoformat(v) if _is_iso_date(v) else None

    if record.kind is DocumentKind.DRIVER_LICENSE:
        dob, issued, expiry = _date("date_of_birth"), _date("issue_date"), _date("expiry_date")
        if dob and issued and not dob < issued:
            violations.append(("issue_date", "date_order",
                               "issue_date must follow date_of_birth"))
        if issued and expiry and not issued < expiry:
            violations.append(("expiry_date", "date_order",
                               "expiry_date must follow issue_date"))
    elif record.kind is DocumentKind.INSURANCE_CARD:
        start, end = _date("coverage_start"), _date("coverage_end")
        if start and end and not start < end:
            violations.append(("coverage_end", "date_order",
                               "coverage_end must follow coverage_start"))

    return ValidationReport(ok=not violations, violations=violations)


# ---------------------------------------------------------------------------
# pools and issuer profiles
# ---------------------------------------------------------------------------

def _load_pool(name: str) -> list[str]:
    text = resources.files("idbsynth.data.wordlists").joinpath(f"{name}.txt").read_text()
    return text.split()


class _Pools:
    _cache: dict[str, list[str]] = {}

    @classmethod
    def get(cls, name: str) -> list[str]:
        if name not in cls._cache:
            if name == "streets":
                lines = resources.files("idbsynth.data.wordlists") \
                    .joinpath("streets.txt").read_text().splitlines()
                cls._cache[name] = [ln for ln in lines if ln]
            elif name == "cities":
                lines = resources.files("idbsynth.data.wordlists") \
                    .joinpath("cities.txt").read_text().splitlines()
                cls._cache[name] = [ln for ln in lines if ln]
            else:
                cls._cache[name] = _load_pool(name)
        return cls._cache[name]


STREET_SUFFIXES = ("St", "Ave", "Blvd", "Dr", "Ln", "Rd", "Ct", "Way")
PLAN_TYPES = ("PPO", "HMO", "EPO", "POS", "HDHP")
DEPARTMENTS = (
    "Computer Science", "Electrical Engineering", "Mechanical Engineering",
    "Mathematics", "Physics", "Chemistry", "Biology", "Economics", "History",
    "Philosophy", "Psychology", "Sociology", "Political Science", "Linguistics",
    "Comparative Literature", "Fine Arts", "Music", "Architecture", "Law",
    "Medicine", "Nursing", "Public Health", "Business Administration",
    "Accounting", "Finance", "Marketing", "Statistics", "Anthropology",
    "Astronomy", "Geology", "Environmental Science", "Civil Engineering",
    "Chemical Engineering", "Materials Science", "Education", "Journalism",
)
DEGREE_LEVELS = ("Bachelor", "Master", "Doctorate", "Associate")


def load_issuer_profiles(path: str | Path | None = None) -> dict:
    """Bundled issuer profiles, or a user-supplied JSON file."""
    if path is None:
        raw = resources.files("idbsynth.data").joinpath("issuer_profiles.json").read_text()
    else:
        raw = Path(path).read_text()
    return json.loads(raw)


def expand_pattern(pattern: str, rng: random.Random) -> str:
    """Expand an identifier template: L = letter, # = digit, else literal."""
    out = []
    for ch in pattern:
        if ch == "L":
            out.append(chr(rng.randrange(65, 91)))
        elif ch == "#":
            out.append(str(rng.randrange(10)))
        else:
            out.append(ch)
    return "".join(out)


def pattern_regex(pattern: str) -> str:
    """Validation regex equivalent of an identifier template."""
    parts = []
    for ch in pattern:
        if ch == "L":
            parts.append("[A-Z]")
        elif ch == "#":
            parts.append("[0-9]")
        else:
            parts.append(re.escape(ch))
    return "^" + "".join(parts) + "$"


def _issuer_profile(profiles: dict, kind: DocumentKind, issuer: str,
                    allow_generic: bool) -> dict:
    section = profiles.get(kind.value, {})
    if issuer in section:
        return section[issuer]
    if allow_generic and "*" in section:
        return section["*"]
    raise UnknownIssuer(f"no profile for {kind.value} issuer {issuer!r}")


# ---------------------------------------------------------------------------
# template generation
# ---------------------------------------------------------------------------

def _unique_identifier(pattern: str, rng: random.Random, seen: set[str]) -> str:
    for _ in range(200):
        candidate = expand_pattern(pattern, rng)
        if candidate not in seen:
            seen.add(candidate)
            return candidate
    raise RuntimeError(f"identifier pattern {pattern!r} exhausted")


def _random_date(rng: random.Random, start_year: int, end_year: int) -> dt.date:
    start = dt.date(start_year, 1, 1).toordinal()
    end = dt.date(end_year, 12, 31).toordinal()
    return dt.date.fromordinal(rng.randint(start, end))


def _shift_years(date: dt.date, years: int) -> dt.date:
    day = min(date.day, 28) if date.month == 2 else date.day
    return date.replace(year=date.year + years, day=day)


def generate_template_records(schema: RecordSchema, issuer: str, country: str,
                              n: int, seed: int, profiles: dict | None = None,
                              allow_generic: bool = True) -> list[IdentityRecord]:
    """Deterministically generate n records for one issuer.

    Pure function of its arguments: the same inputs always produce the
    same list. Identifier fields are unique within the batch.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not issuer or not country:
        raise ValueError("issuer and country must be non-empty")
    profiles = profiles if profiles is not None else load_issuer_profiles()
    profile = _issuer_profile(profiles, schema.kind, issuer, allow_generic)

    rng = random.Random(seed)
    surnames = _Pools.get("surnames")
    given = _Pools.get("given_names")
    streets = _Pools.get("streets")
    cities = _Pools.get("cities")
    seen_ids: set[str] = set()
    records = []

    for _ in range(n):
        fields: dict[str, str] = {}
        if schema.kind is DocumentKind.DRIVER_LICENSE:
            fields["family_name"] = rng.choice(surnames)
            fields["first_name"] = rng.choice(given)
            fields["address_street"] = (
                f"{rng.randint(100, 9999)} {rng.choice(streets)} "
                f"{rng.choice(STREET_SUFFIXES)}")
            fields["address_city"] = rng.choice(cities)
            fields["address_state"] = profile.get("state_code", "XX")
            fields["address_postal"] = f"{rng.randint(0, 99999):05d}"
            dob = _random_date(rng, 1950, 2004)
            issue_year = min(dob.year + rng.randint(18, 45), 2025)
            issue = _random_date(rng, issue_year, issue_year)
            expiry = _shift_years(issue, rng.choice((4, 5, 6, 8)))
            fields["date_of_birth"] = dob.isoformat()
            fields["license_number"] = _unique_identifier(
                profile["license_number"], rng, seen_ids)
            fields["issue_date"] = issue.isoformat()
            fields["expiry_date"] = expiry.isoformat()
            fields["issuing_state"] = issuer
            fields["country"] = country
            if rng.random() < 0.4:
                fields["middle_name"] = rng.choice(given)
            fields["sex"] = rng.choice("MFX")
        elif schema.kind is DocumentKind.INSURANCE_CARD:
            fields["member_name"] = f"{rng.choice(given)} {rng.choice(surnames)}"
            fields["policy_number"] = _unique_identifier(
                profile["policy_number"], rng, seen_ids)
            fields["provider"] = issuer
            fields["plan_type"] = rng.choice(PLAN_TYPES)
            start = _random_date(rng, 2019, 2025)
            end = _shift_years(start, rng.choice((1, 2)))
            fields["coverage_start"] = start.isoformat()
            fields["coverage_end"] = end.isoformat()
            fields["group_number"] = f"{rng.randint(0, 99999):05d}-{rng.randint(0, 99):02d}"
            if rng.random() < 0.5:
                fields["member_id"] = expand_pattern("#########", rng)
            fields["country"] = country
        else:
            fields["student_name"] = f"{rng.choice(given)} {rng.choice(surnames)}"
            fields["student_id"] = _unique_identifier(
                profile["student_id"], rng, seen_ids)
            fields["department"] = rng.choice(DEPARTMENTS)
            fields["enrollment_year"] = str(rng.randint(2015, 2025))
            fields["university"] = issuer
            fields["degree_level"] = rng.choice(DEGREE_LEVELS)
            fields["country"] = country

        ordered = {name: fields[name] for name in schema.all_fields if name in fields}
        record = IdentityRecord.from_fields(schema.kind, ordered, RecordSource.TEMPLATE)
        report = validate_record(record)
        if not report.ok:  # pools and patterns must self-validate
            raise RuntimeError(f"generator produced invalid record: {report.violations}")
        records.append(record)
    return records


# ---------------------------------------------------------------------------
# LLM response parsing and corpus serialization
# ---------------------------------------------------------------------------

def parse_llm_response(text: str, schema: RecordSchema) -> IdentityRecord:
    """Parse a pipe-separated completion into a validated record.

    Accepts `key: value` segments (any order, schema keys only) and bare
    values assigned positionally in schema order.
    """
    if not text or not text.strip():
        raise MalformedResponse("empty response", segment=text)
    segments = [seg.strip() for seg in text.strip().split(SEPARATOR)]
    segments = [seg for seg in segments if seg]
    if not segments:
        raise MalformedResponse("response has no usable segments", segment=text)

    fields: dict[str, str] = {}
    positional: list[str] = []
    for seg in segments:
        if ":" in seg:
            key, _, value = seg.partition(":")
            key = key.strip().lower().replace(" ", "_")
            if key in schema.all_fields:
                fields[key] = value.strip()
                continue
        positional.append(seg)
    for value in positional:
        target = next((f for f in schema.all_fields if f not in fields), None)
        if target is None:
            break
        fields[target] = value

    missing = [f for f in schema.required_fields if not fields.get(f)]
    if missing:
        raise MalformedResponse(
            f"missing required fields: {', '.join(missing)}",
            segment=text, missing_fields=missing)

    for name, value in fields.items():
        rule_id = schema.field_formats.get(name)
        if SEPARATOR in value or (rule_id and not _rule_ok(rule_id, value)):
            raise FormatViolation(
                f"field {name!r} value fails rule {rule_id!r}",
                field=name, segment=f"{name}: {value}")

    ordered = {name: fields[name] for name in schema.all_fields if name in fields}
    record = IdentityRecord.from_fields(schema.kind, ordered, RecordSource.LLM)
    report = validate_record(record)
    if not report.ok:
        name, rule, msg = report.violations[0]
        raise FormatViolation(f"{name}: {msg}", field=name, segment=fields.get(name, ""))
    return record


def dedup_records(records: list[IdentityRecord],
                  key_fields: list[str]) -> list[IdentityRecord]:
    """Drop later records equal on all key fields; order is preserved."""
    for record in records:
        schema = SCHEMAS[record.kind]
        unknown = [k for k in key_fields if k not in schema.all_fields]
        if unknown:
            raise UnknownKeyField(
                f"{unknown} not in {record.kind.value} schema")
    seen: set[tuple] = set()
    out = []
    for record in records:
        key = tuple(record.fields.get(k) for k in key_fields)
        if key not in seen:
            seen.add(key)
            out.append(record)
    return out


def serialize_record(record: IdentityRecord) -> str:
    return SEPARATOR.join(f"{k}: {v}" for k, v in record.fields.items())


def record_hash(record: IdentityRecord) -> str:
    return hashlib.sha256(serialize_record(record).encode("utf-8")).hexdigest()


def write_corpus(records: list[IdentityRecord], path: str | Path) -> None:
    Path(path).write_text(
        "".join(serialize_record(r) + "\n" for r in records), encoding="utf-8")


def read_corpus(path: str | Path, schema: RecordSchema,
                source: RecordSource = RecordSource.TEMPLATE) -> list[IdentityRecord]:
    records = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        record = parse_llm_response(line, schema)
        record.source = source
        records.append(record)
    return records
