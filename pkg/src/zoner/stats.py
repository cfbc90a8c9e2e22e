"""Corpus statistics: per-source, per-zone sentence counts and percentages."""

import csv
import io
import math
from dataclasses import dataclass

from .errors import UnlabeledSentence
from .zones import ZONES


def _pct(count, total):
    if total == 0:
        return 0
    return int(math.floor(100.0 * count / total + 0.5))


@dataclass
class StatsReport:
    sources: list                  # source tags in first-seen order
    counts: dict                   # (source, Zone) -> count
    source_totals: dict            # source -> count
    zone_totals: dict              # Zone -> count
    total: int

    def percent(self, source, zone):
        return _pct(self.counts.get((source, zone), 0), self.source_totals.get(source, 0))

    def overall_percent(self, zone):
        return _pct(self.zone_totals.get(zone, 0), self.total)

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["source", "zone", "count", "percent"])
        for source in self.sources:
            for zone in ZONES:
                writer.writerow(
                    [source, zone.value, self.counts.get((source, zone), 0),
                     self.percent(source, zone)]
                )
            writer.writerow([source, "ALL", self.source_totals[source], 100])
        for zone in ZONES:
            writer.writerow(["ALL", zone.value, self.zone_totals.get(zone, 0),
                             self.overall_percent(zone)])
        writer.writerow(["ALL", "ALL", self.total, 100])
        return buf.getvalue()

    def to_table(self):
        cols = self.sources + ["ALL"]
        lines = []
        header = f"{'Class':<6}" + "".join(f"{c + ' #':>10}{'%':>5}" for c in cols)
        lines.append(header)
        lines.append("-" * len(header))
        for zone in ZONES:
            row = f"{zone.value:<6}"
            for source in self.sources:
                row += f"{self.counts.get((source, zone), 0):>10}{self.percent(source, zone):>5}"
            row += f"{self.zone_totals.get(zone, 0):>10}{self.overall_percent(zone):>5}"
            lines.append(row)
        lines.append("-" * len(header))
        row = f"{'All':<6}"
        for source in self.sources:
            row += f"{self.source_totals[source]:>10}{100:>5}"
        row += f"{self.total:>10}{100:>5}"
        lines.append(row)
        return "\n".join(lines) + "\n"


def corpus_stats(corpus):
    """Count labeled sentences per (source, zone). All sentences must be labeled."""
    offenders = []
    for obit in corpus:
        for sentence in obit.sentences:
            if sentence.gold is None:
                offenders.append((obit.id, sentence.index))
    if offenders:
        raise UnlabeledSentence(offenders)

    sources = []
    counts = {}
    source_totals = {}
    zone_totals = {}
    total = 0
    for obit in corpus:
        if obit.source not in sources:
            sources.append(obit.source)
        for sentence in obit.sentences:
            key = (obit.source, sentence.gold)
            counts[key] = counts.get(key, 0) + 1
            source_totals[obit.source] = source_totals.get(obit.source, 0) + 1
            zone_totals[sentence.gold] = zone_totals.get(sentence.gold, 0) + 1
            total += 1
    return StatsReport(
        sources=sources,
        counts=counts,
        source_totals=source_totals,
        zone_totals=zone_totals,
        total=total,
    )
