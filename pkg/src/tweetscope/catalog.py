"""Low-credibility source catalogs: loading, tag-to-category rules, URL lookup.

Category labels are inherited by a tweet from the catalog entry of any news
domain it links. A domain can carry several labels; a domain whose only
signal is a lone "political" tag is excluded (bias alone is not
misinformation).
"""

from __future__ import annotations

import csv
import logging
import re
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import BadRow, UnknownTag, UnparsableUrl

logger = logging.getLogger(__name__)

UNRELIABLE = "unreliable"
CONSPIRACY = "conspiracy"
CLICKBAIT = "clickbait"
POLITICAL_BIASED = "political_biased"

CATEGORIES = (UNRELIABLE, CONSPIRACY, CLICKBAIT, POLITICAL_BIASED)
OTHERS = "others"

PROVIDERS = ("mbfc", "newsguard", "zimdars")

# Provider tag vocabularies and their category mapping.
_TAG_RULES: dict[str, dict[str, str]] = {
    "mbfc": {"low": UNRELIABLE, "very-low": UNRELIABLE},
    "newsguard": {"covid-false": UNRELIABLE},
    "zimdars": {
        "fake": UNRELIABLE,
        "rumor": UNRELIABLE,
        "unreliable": UNRELIABLE,
        "satire": UNRELIABLE,
        "conspiracy": CONSPIRACY,
        "junksci": CONSPIRACY,
        "clickbait": CLICKBAIT,
        "bias": POLITICAL_BIASED,
        "political": POLITICAL_BIASED,
    },
}

_SCHEME_RE = re.compile(r"^[a-zA-Z][a-zA-Z0-9+.-]*://")


def normalize_domain(url: str) -> str:
    """Extract the host: scheme optional, lowercased, leading "www."
    stripped, userinfo/port/path removed."""
    if not url or not url.strip():
        raise UnparsableUrl("empty url")
    s = url.strip()
    s = _SCHEME_RE.sub("", s)
    if s.startswith("//"):
        s = s[2:]
    for stop in "/?#":
        i = s.find(stop)
        if i != -1:
            s = s[:i]
    at = s.rfind("@")
    if at != -1:
        s = s[at + 1:]
    colon = s.find(":")
    if colon != -1:
        s = s[:colon]
    s = s.strip().lower().rstrip(".")
    if s.startswith("www."):
        s = s[4:]
    if not s or " " in s:
        raise UnparsableUrl(f"no host in {url!r}")
    return s


def categorize_tags(provider: str, tags: Iterable[str], strict: bool = True) -> frozenset[str]:
    """Map one provider's tag set to misinformation categories.

    A zimdars tag set equal to exactly {political} maps to the empty set:
    reliable-but-biased sources are excluded.
    """
    if provider not in _TAG_RULES:
        raise UnknownTag(f"unknown provider {provider!r}")
    rules = _TAG_RULES[provider]
    cleaned = {t.strip().lower() for t in tags if t.strip()}
    if provider == "zimdars" and cleaned == {"political"}:
        return frozenset()
    out = set()
    for tag in sorted(cleaned):
        category = rules.get(tag)
        if category is None:
            if strict:
                raise UnknownTag(f"unknown {provider} tag {tag!r}")
            logger.warning("skipping unknown %s tag %r", provider, tag)
            continue
        out.add(category)
    return frozenset(out)


@dataclass(frozen=True)
class CatalogEntry:
    categories: frozenset[str]
    providers: frozenset[str]
    raw_tags: tuple[str, ...]      # "provider:tag", sorted


class SourceCatalog:
    def __init__(self, entries: dict[str, CatalogEntry],
                 aliases: Optional[dict[str, str]] = None):
        self.entries = entries
        self.aliases = aliases or {}

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, domain: str) -> bool:
        return domain in self.entries

    def lookup(self, url: str) -> Optional[frozenset[str]]:
        entry = self.lookup_entry(url)
        return entry.categories if entry else None

    def lookup_entry(self, url: str) -> Optional[CatalogEntry]:
        domain = self.match_domain(url)
        return self.entries[domain] if domain else None

    def match_domain(self, url: str) -> Optional[str]:
        """The catalog domain a URL matches: exact host first, then suffix
        fallback stripping leftmost labels (m.badnews.org -> badnews.org)."""
        try:
            host = normalize_domain(url)
        except UnparsableUrl:
            return None
        host = self.aliases.get(host, host)
        candidate = host
        while True:
            if candidate in self.entries:
                return candidate
            dot = candidate.find(".")
            if dot == -1:
                return None
            candidate = candidate[dot + 1:]
            if "." not in candidate:
                # bare TLDs never match
                return None


def lookup(catalog: SourceCatalog, url: str) -> Optional[frozenset[str]]:
    return catalog.lookup(url)


def load_catalog(paths: Sequence[str], strict: bool = True,
                 aliases_path: Optional[str] = None) -> SourceCatalog:
    """Merge provider CSVs (header domain,provider,tags; tags ';'-separated).

    Per-domain categories are the union across providers, computed after
    merging each provider's tags, so the solely-{political} exclusion sees
    the full zimdars tag set. Entries left with no category are dropped.
    Result is independent of file and row order.
    """
    tags_by_key: dict[tuple[str, str], set[str]] = {}
    for path in paths:
        with open(path, "rt", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or [h.strip().lower() for h in header] != \
                    ["domain", "provider", "tags"]:
                raise BadRow(f"{path}: expected header domain,provider,tags")
            for lineno, row in enumerate(reader, start=2):
                if not row or all(not c.strip() for c in row):
                    continue
                if len(row) != 3:
                    raise BadRow(f"{path}:{lineno}: expected 3 columns")
                raw_domain, provider, tag_cell = (c.strip() for c in row)
                provider = provider.lower()
                if provider not in PROVIDERS:
                    raise BadRow(f"{path}:{lineno}: unknown provider {provider!r}")
                try:
                    domain = normalize_domain(raw_domain)
                except UnparsableUrl:
                    raise BadRow(f"{path}:{lineno}: bad domain {raw_domain!r}") from None
                tags = {t.strip().lower() for t in tag_cell.split(";") if t.strip()}
                if not tags:
                    raise BadRow(f"{path}:{lineno}: no tags for {domain}")
                tags_by_key.setdefault((domain, provider), set()).update(tags)

    merged: dict[str, dict[str, set[str]]] = {}
    for (domain, provider), tags in tags_by_key.items():
        merged.setdefault(domain, {})[provider] = tags

    entries: dict[str, CatalogEntry] = {}
    for domain in sorted(merged):
        categories: set[str] = set()
        providers: set[str] = set()
        raw: list[str] = []
        for provider in sorted(merged[domain]):
            tags = merged[domain][provider]
            categories |= categorize_tags(provider, tags, strict=strict)
            providers.add(provider)
            raw.extend(f"{provider}:{t}" for t in sorted(tags))
        if not categories:
            continue
        entries[domain] = CatalogEntry(frozenset(categories),
                                       frozenset(providers), tuple(sorted(raw)))

    aliases = _load_aliases(aliases_path) if aliases_path else None
    return SourceCatalog(entries, aliases)


def _load_aliases(path: str) -> dict[str, str]:
    """CSV alias,canonical — shortener domains mapped before lookup."""
    out: dict[str, str] = {}
    with open(path, "rt", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header] != ["alias", "canonical"]:
            raise BadRow(f"{path}: expected header alias,canonical")
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 2:
                raise BadRow(f"{path}:{lineno}: expected 2 columns")
            out[normalize_domain(row[0])] = normalize_domain(row[1])
    return out
