#!/usr/bin/env python3
"""Convert public review dumps to the JSON-lines corpus read by `extra build`.

Output records carry user, item, rating (integer 1..5), timestamp (Unix
seconds), text and, when the source has one, title.

  amazon       one JSON object per line (2014 or 2018 release), plain or .gz:
               reviewerID, asin, overall, unixReviewTime, reviewText, summary
  yelp         review.json from the Yelp Open Dataset:
               user_id, business_id, stars, date, text
  tripadvisor  per-hotel JSON files ({"HotelInfo": {"HotelID"}, "Reviews": [...]})
               with Author, Ratings.Overall, Date, Content, Title per review;
               pass the files or a directory holding them

Records lacking a required field are skipped and counted on stderr.
"""
import argparse
import gzip
import json
import sys
from datetime import datetime, timezone
from pathlib import Path


def open_text(path):
    if str(path).endswith(".gz"):
        return gzip.open(path, "rt", encoding="utf-8")
    return open(path, encoding="utf-8")


def json_lines(paths):
    for path in paths:
        with open_text(path) as f:
            for line in f:
                line = line.strip()
                if line:
                    yield json.loads(line)


def to_rating(value):
    rating = int(round(float(value)))
    if not 1 <= rating <= 5:
        raise ValueError(f"rating {value} outside 1..5")
    return rating


def parse_date(text, formats):
    for fmt in formats:
        try:
            dt = datetime.strptime(text.strip(), fmt)
            return int(dt.replace(tzinfo=timezone.utc).timestamp())
        except ValueError:
            continue
    raise ValueError(f"unrecognized date '{text}'")


def amazon_rows(paths):
    return json_lines(paths)


def amazon(r):
    out = {
        "user": r["reviewerID"],
        "item": r["asin"],
        "rating": to_rating(r["overall"]),
        "timestamp": int(r["unixReviewTime"]),
        "text": r.get("reviewText", ""),
    }
    if r.get("summary"):
        out["title"] = r["summary"]
    return out


def yelp_rows(paths):
    return json_lines(paths)


def yelp(r):
    return {
        "user": r["user_id"],
        "item": r["business_id"],
        "rating": to_rating(r["stars"]),
        "timestamp": parse_date(r["date"], ("%Y-%m-%d %H:%M:%S", "%Y-%m-%d")),
        "text": r["text"],
    }


def tripadvisor_rows(paths):
    files = []
    for path in paths:
        p = Path(path)
        if p.is_dir():
            files.extend(sorted(q for q in p.iterdir() if q.suffix in (".json", ".gz")))
        else:
            files.append(p)
    for path in files:
        with open_text(path) as f:
            hotel = json.load(f)
        item = str(hotel["HotelInfo"]["HotelID"])
        for review in hotel.get("Reviews", []):
            yield item, review


def tripadvisor(row):
    item, r = row
    out = {
        "user": r["Author"],
        "item": item,
        "rating": to_rating(r["Ratings"]["Overall"]),
        "timestamp": parse_date(r["Date"], ("%B %d, %Y", "%b %d, %Y", "%Y-%m-%d")),
        "text": r.get("Content", ""),
    }
    if r.get("Title"):
        out["title"] = r["Title"].strip("\u201c\u201d\"")
    return out


SOURCES = {
    "amazon": (amazon_rows, amazon),
    "yelp": (yelp_rows, yelp),
    "tripadvisor": (tripadvisor_rows, tripadvisor),
}


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("source", choices=sorted(SOURCES))
    parser.add_argument("inputs", nargs="+", help="input files (or directories for tripadvisor)")
    parser.add_argument("-o", "--output", help="output path (default stdout; .gz compresses)")
    parser.add_argument("--limit", type=int, help="stop after this many records")
    args = parser.parse_args()

    out = sys.stdout
    if args.output:
        out = gzip.open(args.output, "wt", encoding="utf-8") if args.output.endswith(".gz") \
            else open(args.output, "w", encoding="utf-8")
    written = skipped = 0
    rows, convert = SOURCES[args.source]
    for row in rows(args.inputs):
        if args.limit is not None and written >= args.limit:
            break
        try:
            record = convert(row)
        except (KeyError, TypeError, ValueError) as e:
            skipped += 1
            print(f"skipped record: {e!r}", file=sys.stderr)
            continue
        if not record["text"] and not record.get("title"):
            skipped += 1
            continue
        out.write(json.dumps(record, ensure_ascii=False) + "\n")
        written += 1
    if out is not sys.stdout:
        out.close()
    print(f"{written} records written, {skipped} skipped", file=sys.stderr)


if __name__ == "__main__":
    main()
