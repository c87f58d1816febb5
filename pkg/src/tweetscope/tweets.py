"""Tweet model, NDJSON record parsing, and keyword matching.

Input records follow the public tweet-object layout: one JSON object per
line with id_str, created_at, text|full_text, lang, user{...}, optional
coordinates/place, optional retweeted_status / in_reply_to_status_id_str,
and entities{hashtags, urls}.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterator, Optional

from .errors import InvalidTimestamp, MalformedRecord, MissingField

RETWEET = "retweet"
REPLY = "reply"

# The six collection keywords; matching is case-insensitive substring.
DEFAULT_KEYWORDS = (
    "covid19",
    "coronavirus",
    "corona virus",
    "2019ncov",
    "coronavirusoutbreak",
    "coronapocalypse",
)

_MONTHS = {
    "Jan": 1, "Feb": 2, "Mar": 3, "Apr": 4, "May": 5, "Jun": 6,
    "Jul": 7, "Aug": 8, "Sep": 9, "Oct": 10, "Nov": 11, "Dec": 12,
}

_DAYS_BEFORE_MONTH = (0, 0, 31, 59, 90, 120, 151, 181, 212, 243, 273, 304, 334)


def _days_from_civil(y: int, m: int, d: int) -> int:
    """Days since 1970-01-01 for a proleptic Gregorian date."""
    leap = y % 4 == 0 and (y % 100 != 0 or y % 400 == 0)
    days = (y - 1970) * 365 + (y - 1969) // 4 - (y - 1901) // 100 + (y - 1601) // 400
    days += _DAYS_BEFORE_MONTH[m] + (1 if leap and m > 2 else 0)
    return days + d - 1


def parse_timestamp(value: Any) -> int:
    """Parse the classic Twitter format or ISO-8601 into UTC epoch seconds.

    Accepts "Wed Mar 04 12:00:00 +0000 2020" and "2020-03-04T12:00:00Z"
    (with optional fractional seconds and numeric offsets). Raises
    InvalidTimestamp on anything else.
    """
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return int(value)
    if not isinstance(value, str) or not value:
        raise InvalidTimestamp(f"unparsable timestamp: {value!r}")
    s = value.strip()
    try:
        if s[0].isalpha():
            # "Wed Mar 04 12:00:00 +0000 2020"
            _, mon, day, clock, tz, year = s.split()
            hh, mm, ss = clock.split(":")
            off = int(tz[1:3]) * 3600 + int(tz[3:5]) * 60
            if tz[0] == "-":
                off = -off
            days = _days_from_civil(int(year), _MONTHS[mon], int(day))
            return days * 86400 + int(hh) * 3600 + int(mm) * 60 + int(ss) - off
        # ISO-8601: normalize Z and reuse the same arithmetic.
        date_part, _, time_part = s.partition("T")
        if not time_part:
            date_part, _, time_part = s.partition(" ")
        y, mo, d = date_part.split("-")
        off = 0
        if time_part:
            tp = time_part
            if tp.endswith("Z"):
                tp = tp[:-1]
            else:
                for sign in ("+", "-"):
                    i = tp.find(sign)
                    if i > 0:
                        tzs = tp[i:].replace(":", "")
                        off = int(tzs[1:3]) * 3600 + int(tzs[3:5] or 0) * 60
                        if sign == "-":
                            off = -off
                        tp = tp[:i]
                        break
            hh, mm, ss = (tp.split(":") + ["0", "0"])[:3]
            secs = int(hh) * 3600 + int(mm) * 60 + int(float(ss))
        else:
            secs = 0
        days = _days_from_civil(int(y), int(mo), int(d))
        return days * 86400 + secs - off
    except InvalidTimestamp:
        raise
    except Exception:
        raise InvalidTimestamp(f"unparsable timestamp: {value!r}") from None


def day_of(ts: int) -> int:
    """UTC day index (days since epoch) of a timestamp."""
    return ts // 86400


def iso_ts(ts: int) -> str:
    """ISO-8601 UTC string for an epoch-second timestamp."""
    day, rem = divmod(ts, 86400)
    hh, rem = divmod(rem, 3600)
    mm, ss = divmod(rem, 60)
    return f"{day_str(day)}T{hh:02d}:{mm:02d}:{ss:02d}Z"


def day_str(day: int) -> str:
    """ISO date string for a UTC day index."""
    # Inverse of _days_from_civil; avoids datetime overhead in hot loops.
    z = day + 719468
    era = (z if z >= 0 else z - 146096) // 146097
    doe = z - era * 146097
    yoe = (doe - doe // 1460 + doe // 36524 - doe // 146096) // 365
    y = yoe + era * 400
    doy = doe - (365 * yoe + yoe // 4 - yoe // 100)
    mp = (5 * doy + 2) // 153
    d = doy - (153 * mp + 2) // 5 + 1
    m = mp + 3 if mp < 10 else mp - 9
    if m <= 2:
        y += 1
    return f"{y:04d}-{m:02d}-{d:02d}"


@dataclass(frozen=True)
class UserRef:
    user_id: int
    screen_name: str
    verified: bool = False
    profile_location: Optional[str] = None


@dataclass
class Tweet:
    id: int
    created_at: int              # UTC epoch seconds
    text: str
    lang: str
    user: UserRef
    parent_id: Optional[int] = None
    parent_kind: Optional[str] = None   # RETWEET | REPLY
    hashtags: list[str] = field(default_factory=list)
    urls: list[str] = field(default_factory=list)
    coordinates: Optional[tuple[float, float]] = None   # (lon, lat)
    place_country: Optional[str] = None
    place_name: Optional[str] = None
    synthetic: bool = False      # materialized from an embedded retweeted_status

    @property
    def is_source(self) -> bool:
        return self.parent_id is None

    def to_record(self) -> dict:
        """Canonical dict used for the corpus store log."""
        rec: dict[str, Any] = {
            "id": self.id,
            "ts": self.created_at,
            "text": self.text,
            "lang": self.lang,
            "uid": self.user.user_id,
            "sn": self.user.screen_name,
        }
        if self.user.verified:
            rec["ver"] = True
        if self.user.profile_location:
            rec["loc"] = self.user.profile_location
        if self.parent_id is not None:
            rec["par"] = self.parent_id
            rec["pk"] = self.parent_kind
        if self.hashtags:
            rec["tags"] = self.hashtags
        if self.urls:
            rec["urls"] = self.urls
        if self.coordinates is not None:
            rec["lon"], rec["lat"] = self.coordinates
        if self.place_country:
            rec["pc"] = self.place_country
        if self.place_name:
            rec["pn"] = self.place_name
        if self.synthetic:
            rec["syn"] = True
        return rec

    @classmethod
    def from_record(cls, rec: dict) -> "Tweet":
        coords = None
        if "lon" in rec:
            coords = (rec["lon"], rec["lat"])
        return cls(
            id=rec["id"],
            created_at=rec["ts"],
            text=rec["text"],
            lang=rec["lang"],
            user=UserRef(rec["uid"], rec["sn"], rec.get("ver", False), rec.get("loc")),
            parent_id=rec.get("par"),
            parent_kind=rec.get("pk"),
            hashtags=rec.get("tags", []),
            urls=rec.get("urls", []),
            coordinates=coords,
            place_country=rec.get("pc"),
            place_name=rec.get("pn"),
            synthetic=rec.get("syn", False),
        )


def _extract_one(obj: dict) -> Tweet:
    try:
        raw_id = obj["id_str"] if "id_str" in obj else obj["id"]
        tweet_id = int(raw_id)
    except (KeyError, TypeError, ValueError):
        raise MissingField("record has no usable id") from None

    text = obj.get("full_text") or obj.get("text")
    if not isinstance(text, str) or not text:
        raise MissingField(f"record {tweet_id} has no text")

    created = parse_timestamp(obj.get("created_at"))

    user_obj = obj.get("user") or {}
    try:
        uid = int(user_obj.get("id_str") or user_obj.get("id") or 0)
    except (TypeError, ValueError):
        uid = 0
    user = UserRef(
        user_id=uid,
        screen_name=user_obj.get("screen_name") or "",
        verified=bool(user_obj.get("verified", False)),
        profile_location=user_obj.get("location") or None,
    )

    parent_id = None
    parent_kind = None
    rt = obj.get("retweeted_status")
    if isinstance(rt, dict):
        try:
            parent_id = int(rt.get("id_str") or rt.get("id"))
            parent_kind = RETWEET
        except (TypeError, ValueError):
            parent_id = None
    if parent_id is None:
        reply_to = obj.get("in_reply_to_status_id_str") or obj.get("in_reply_to_status_id")
        if reply_to is not None:
            try:
                parent_id = int(reply_to)
                parent_kind = REPLY
            except (TypeError, ValueError):
                parent_id = None
    if parent_id == tweet_id:
        parent_id = None
        parent_kind = None

    entities = obj.get("entities") or {}
    hashtags = []
    for h in entities.get("hashtags") or []:
        tag = (h.get("text") or "").lower()
        if tag:
            hashtags.append(tag)
    urls = []
    for u in entities.get("urls") or []:
        expanded = u.get("expanded_url") or u.get("url")
        if expanded:
            urls.append(expanded)

    coords = None
    coord_obj = obj.get("coordinates")
    if isinstance(coord_obj, dict):
        pair = coord_obj.get("coordinates")
        if isinstance(pair, (list, tuple)) and len(pair) == 2:
            lon, lat = float(pair[0]), float(pair[1])
            if -180.0 <= lon <= 180.0 and -90.0 <= lat <= 90.0:
                coords = (lon, lat)

    place_country = None
    place_name = None
    place = obj.get("place")
    if isinstance(place, dict):
        place_country = place.get("country_code") or None
        place_name = place.get("full_name") or None

    return Tweet(
        id=tweet_id,
        created_at=created,
        text=text,
        lang=obj.get("lang") or "und",
        user=user,
        parent_id=parent_id,
        parent_kind=parent_kind,
        hashtags=hashtags,
        urls=urls,
        coordinates=coords,
        place_country=place_country,
        place_name=place_name,
    )


# parse failures inside an embedded object must not sink the primary record
_EMBEDDED_PARSE_ERRORS = (MissingField, InvalidTimestamp)


def parse_tweet(raw: str) -> list[Tweet]:
    """Parse one NDJSON line into tweets.

    Returns the primary tweet first; when the record embeds a
    retweeted_status object, that source post is also materialized as a
    synthetic Tweet (second element) so cascades can root at sources
    outside the sampled stream. Dedup happens downstream by id.
    """
    try:
        obj = json.loads(raw)
    except (json.JSONDecodeError, TypeError):
        raise MalformedRecord("invalid JSON") from None
    if not isinstance(obj, dict):
        raise MalformedRecord("record is not a JSON object")

    primary = _extract_one(obj)
    out = [primary]

    rt = obj.get("retweeted_status")
    if isinstance(rt, dict) and primary.parent_kind == RETWEET:
        try:
            parent = _extract_one(rt)
        except _EMBEDDED_PARSE_ERRORS:
            parent = None
        if parent is not None and parent.id == primary.parent_id:
            parent.synthetic = True
            out.append(parent)
    return out


def matches_keywords(text: str, keywords: list[str] | tuple[str, ...]) -> bool:
    """Case-insensitive substring match against any keyword.

    Multi-word keywords match across a single space because both sides are
    compared as plain lowercase strings.
    """
    lowered = text.lower()
    return any(k.lower() in lowered for k in keywords)


def iter_ndjson(path: str) -> Iterator[str]:
    """Yield raw lines from an NDJSON file, transparently gunzipping."""
    if path.endswith(".gz"):
        import gzip

        with gzip.open(path, "rt", encoding="utf-8", errors="replace") as fh:
            yield from fh
    else:
        with open(path, "rt", encoding="utf-8", errors="replace") as fh:
            yield from fh
