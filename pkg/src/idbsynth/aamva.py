"""AAMVA DL/ID card-design payload serialization.

The byte payload a US driver's license PDF417 carries: a fixed compliance
header ('@' LF RS CR then "ANSI "), issuer number and version fields, a
subfile designator table, and LF-delimited 3-letter data elements inside
CR-terminated subfiles. Targets the 2020 card-design edition (version
code "10") with a fixed element mapping; one "DL" subfile is produced,
multi-subfile payloads parse fine.

Dates are rendered MMDDCCYY on the wire and ISO in records.
"""

from __future__ import annotations

import datetime as dt
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import (
    BadHeader,
    DesignatorOutOfBounds,
    DuplicateElement,
    MissingMandatoryField,
    NonAsciiValue,
)
from .records import DocumentKind, IdentityRecord, RecordSource, validate_record

COMPLIANCE_PREFIX = b"@\n\x1e\rANSI "
AAMVA_VERSION = "10"
LF = b"\n"
CR = b"\r"

# Synthetic issuer numbers only: 999xxx is outside the allocated range.
DEFAULT_IIN_POOL = tuple(f"{999000 + i}" for i in range(10))

FIELD_TO_ELEMENT = {
    "license_number": "DAQ",
    "family_name": "DCS",
    "first_name": "DAC",
    "date_of_birth": "DBB",
    "expiry_date": "DBA",
    "issue_date": "DBD",
    "address_street": "DAG",
    "address_city": "DAI",
    "address_state": "DAJ",
    "address_postal": "DAK",
    "country": "DCG",
}
DATE_ELEMENTS = ("DBB", "DBA", "DBD")


@dataclass(frozen=True)
class AamvaProfile:
    field_to_element: dict[str, str]
    date_format: str = "MMDDCCYY"
    mandatory_elements: tuple[str, ...] = tuple(FIELD_TO_ELEMENT.values())

    @classmethod
    def default(cls) -> "AamvaProfile":
        return cls(field_to_element=dict(FIELD_TO_ELEMENT))

    @classmethod
    def from_json(cls, path: str | Path) -> "AamvaProfile":
        data = json.loads(Path(path).read_text())
        return cls(field_to_element=dict(data["field_to_element"]),
                   date_format=data.get("date_format", "MMDDCCYY"),
                   mandatory_elements=tuple(data.get(
                       "mandatory_elements", tuple(data["field_to_element"].values()))))

    @property
    def element_to_field(self) -> dict[str, str]:
        return {v: k for k, v in self.field_to_element.items()}


@dataclass
class Subfile:
    subfile_type: str
    elements: list[tuple[str, str]] = field(default_factory=list)

    def serialize(self) -> bytes:
        out = bytearray(self.subfile_type.encode("ascii"))
        for element_id, value in self.elements:
            out += element_id.encode("ascii") + value.encode("ascii") + LF
        out += CR
        return bytes(out)


@dataclass
class AamvaDocument:
    iin: str
    aamva_version: str
    jurisdiction_version: str
    subfiles: list[Subfile]


def _iso_to_wire(value: str) -> str:
    date = dt.date.fromisoformat(value)
    return f"{date.month:02d}{date.day:02d}{date.year:04d}"


def _wire_to_iso(value: str) -> str:
    if len(value) != 8 or not value.isdigit():
        raise BadHeader(f"bad MMDDCCYY date: {value!r}")
    return f"{value[4:8]}-{value[0:2]}-{value[2:4]}"


def serialize_aamva(record: IdentityRecord, profile: AamvaProfile | None = None,
                    iin: str = DEFAULT_IIN_POOL[0],
                    versions: tuple[str, str] = (AAMVA_VERSION, "00")) -> bytes:
    """Serialize a valid driver-license record to the wire payload."""
    if record.kind is not DocumentKind.DRIVER_LICENSE:
        raise ValueError("only driver-license records have an AAMVA payload")
    profile = profile or AamvaProfile.default()

    field_for = profile.element_to_field
    for element_id in profile.mandatory_elements:
        if not record.fields.get(field_for.get(element_id, "")):
            raise MissingMandatoryField(element_id)
    report = validate_record(record)
    if not report.ok:
        raise ValueError(f"record fails validation: {report.violations[:3]}")

    elements: list[tuple[str, str]] = []
    for field_name, element_id in profile.field_to_element.items():
        value = record.fields.get(field_name)
        if value is None:
            continue
        if element_id in DATE_ELEMENTS:
            value = _iso_to_wire(value)
        if not value.isascii() or not value.isprintable():
            raise NonAsciiValue(f"{field_name} value not printable ASCII: {value!r}")
        elements.append((element_id, value))

    subfile = Subfile(subfile_type="DL", elements=elements)
    body = subfile.serialize()

    n_subfiles = 1
    header_len = len(COMPLIANCE_PREFIX) + 6 + 2 + 2 + 2 + 10 * n_subfiles
    designator = f"DL{header_len:04d}{len(body):04d}"
    if not (iin.isdigit() and len(iin) == 6):
        raise ValueError(f"IIN must be 6 digits, got {iin!r}")
    header = (COMPLIANCE_PREFIX + iin.encode("ascii")
              + versions[0].encode("ascii") + versions[1].encode("ascii")
              + f"{n_subfiles:02d}".encode("ascii") + designator.encode("ascii"))
    return header + body


def _parse_header(payload: bytes) -> tuple[AamvaDocument, list[tuple[str, int, int]]]:
    if not payload.startswith(COMPLIANCE_PREFIX):
        raise BadHeader(f"compliance prefix missing: {payload[:9]!r}")
    pos = len(COMPLIANCE_PREFIX)
    fixed = payload[pos:pos + 12]
    if len(fixed) < 12:
        raise BadHeader("header truncated before designators")
    iin, aamva_ver, juris_ver, entries = (
        fixed[:6].decode("ascii"), fixed[6:8].decode("ascii"),
        fixed[8:10].decode("ascii"), fixed[10:12].decode("ascii"))
    if not (iin.isdigit() and entries.isdigit()):
        raise BadHeader(f"non-numeric IIN or entry count: {iin!r}/{entries!r}")
    pos += 12
    designators = []
    for _ in range(int(entries)):
        raw = payload[pos:pos + 10]
        if len(raw) < 10:
            raise BadHeader("designator table truncated")
        subfile_type = raw[:2].decode("ascii")
        offset, length = int(raw[2:6]), int(raw[6:10])
        designators.append((subfile_type, offset, length))
        pos += 10
    doc = AamvaDocument(iin=iin, aamva_version=aamva_ver,
                        jurisdiction_version=juris_ver, subfiles=[])
    return doc, designators


def parse_document(payload: bytes) -> AamvaDocument:
    """Parse header and subfiles without mapping elements to a record."""
    doc, designators = _parse_header(payload)
    for subfile_type, offset, length in designators:
        if offset + length > len(payload) or offset < 0 or length <= 0:
            raise DesignatorOutOfBounds(
                f"{subfile_type} designator ({offset}, {length}) exceeds "
                f"{len(payload)}-byte payload")
        chunk = payload[offset:offset + length]
        if not chunk.startswith(subfile_type.encode("ascii")):
            raise BadHeader(f"subfile at {offset} does not start with {subfile_type}")
        body = chunk[len(subfile_type):]
        if body.endswith(CR):
            body = body[:-1]
        elements: list[tuple[str, str]] = []
        seen: set[str] = set()
        for item in body.split(LF):
            if not item:
                continue
            element_id = item[:3].decode("ascii", errors="replace")
            if len(item) < 3 or not element_id.isalnum() or not element_id.isupper():
                raise BadHeader(f"bad element tag {item[:3]!r}")
            if element_id in seen:
                raise DuplicateElement(f"{element_id} appears twice in {subfile_type}")
            seen.add(element_id)
            elements.append((element_id, item[3:].decode("ascii")))
        doc.subfiles.append(Subfile(subfile_type=subfile_type, elements=elements))
    return doc


def parse_aamva(payload: bytes, profile: AamvaProfile | None = None) -> IdentityRecord:
    """Inverse of serialize_aamva on all profile-mapped fields."""
    if not payload:
        raise BadHeader("empty payload")
    profile = profile or AamvaProfile.default()
    doc = parse_document(payload)
    element_to_field = profile.element_to_field
    fields: dict[str, str] = {}
    for subfile in doc.subfiles:
        for element_id, value in subfile.elements:
            field_name = element_to_field.get(element_id)
            if field_name is None:
                continue
            if element_id in DATE_ELEMENTS:
                value = _wire_to_iso(value)
            fields[field_name] = value
    ordered = {name: fields[name] for name in
               ("family_name", "first_name", "address_street", "address_city",
                "address_state", "address_postal", "date_of_birth",
                "license_number", "issue_date", "expiry_date", "country")
               if name in fields}
    ordered.update({k: v for k, v in fields.items() if k not in ordered})
    return IdentityRecord.from_fields(DocumentKind.DRIVER_LICENSE, ordered,
                                      RecordSource.TEMPLATE)
