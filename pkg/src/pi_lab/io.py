"""Profile files, the results CSV, and run configuration loading.

The profile format is a strict-order, complete-ranking text file:

    # optional comments
    <n_candidates>
    <id>,<label>            (one line per candidate)
    <n_voters>,<n_voters>,<n_unique_orders>
    <count>: <c1>,<c2>,...  (one line per unique ballot)

Candidate ids are 0-based. Voter ids are assigned in file order,
expanding counts, so the format is anonymized: write(read(f)) == f up to
comments and label defaults.
"""

from __future__ import annotations

import csv
import os
import tempfile
from collections import Counter
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import yaml

from .core import Profile, Ranking
from .measures import MEASURES, EstimateRow, SimulationConfig, TrialTally

RESULTS_HEADER = (
    "paradigm,measure,model,method,variant,comparison,candidates,voters,"
    "coalition_frac,coalition_size_even,coalition_size_odd,trials,skipped,"
    "cond_hits,num_event,num_base,den_event,den_base,estimate,stderr,seed"
)


class ProfileParseError(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


# ---------------------------------------------------------------------------
# profile files
# ---------------------------------------------------------------------------

def _content_lines(text: str) -> List[Tuple[int, str]]:
    out = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            out.append((no, line))
    return out


def parse_profile(text: str) -> Tuple[Profile, List[str]]:
    """Parse the profile grammar; returns (profile, candidate labels)."""
    lines = _content_lines(text)
    if not lines:
        raise ProfileParseError(1, "empty profile file")
    pos = 0

    def take(what: str) -> Tuple[int, str]:
        nonlocal pos
        if pos >= len(lines):
            last = lines[-1][0] if lines else 1
            raise ProfileParseError(last, f"unexpected end of file, expected {what}")
        item = lines[pos]
        pos += 1
        return item

    no, line = take("candidate count")
    try:
        n = int(line)
    except ValueError:
        raise ProfileParseError(no, f"expected candidate count, got {line!r}")
    if n < 1:
        raise ProfileParseError(no, "candidate count must be positive")

    labels = [""] * n
    seen_ids = set()
    for _ in range(n):
        no, line = take("candidate line '<id>,<label>'")
        cid_s, _, label = line.partition(",")
        try:
            cid = int(cid_s)
        except ValueError:
            raise ProfileParseError(no, f"bad candidate id {cid_s!r}")
        if not 0 <= cid < n or cid in seen_ids:
            raise ProfileParseError(no, f"candidate id {cid} out of range or repeated")
        seen_ids.add(cid)
        labels[cid] = label.strip()

    no, line = take("totals line '<n_voters>,<n_voters>,<n_unique_orders>'")
    parts = line.split(",")
    if len(parts) != 3:
        raise ProfileParseError(no, f"expected three comma-separated totals, got {line!r}")
    try:
        total_a, total_b, unique = (int(p) for p in parts)
    except ValueError:
        raise ProfileParseError(no, f"non-integer totals in {line!r}")
    if total_a != total_b:
        raise ProfileParseError(no, "the two voter totals must agree")
    if unique < 1:
        raise ProfileParseError(no, "profile must contain at least one ballot line")

    ballots: List[Ranking] = []
    for _ in range(unique):
        no, line = take("ballot line '<count>: <c1>,<c2>,...'")
        count_s, sep, order_s = line.partition(":")
        if not sep:
            raise ProfileParseError(no, f"missing ':' in ballot line {line!r}")
        try:
            count = int(count_s)
        except ValueError:
            raise ProfileParseError(no, f"bad ballot count {count_s!r}")
        if count < 1:
            raise ProfileParseError(no, "ballot count must be positive")
        try:
            order = [int(p) for p in order_s.split(",")]
        except ValueError:
            raise ProfileParseError(no, f"bad candidate id in {order_s!r}")
        if sorted(order) != list(range(n)):
            raise ProfileParseError(
                no, f"ballot {order} is not a permutation of 0..{n - 1}"
            )
        ballots.extend([Ranking(order)] * count)

    if pos < len(lines):
        raise ProfileParseError(lines[pos][0], "trailing content after ballot lines")
    if len(ballots) != total_a:
        raise ProfileParseError(
            no, f"ballot counts sum to {len(ballots)}, expected {total_a}"
        )
    return Profile(n, ballots), labels


def format_profile(profile: Profile, labels: Optional[Sequence[str]] = None) -> str:
    n = profile.n_candidates
    if labels is None:
        labels = [chr(ord("a") + c) if n <= 26 else f"c{c}" for c in range(n)]
    counts = Counter(b.order for b in profile.ballots)
    # first-appearance order keeps write(read(f)) stable
    lines = [str(n)]
    lines += [f"{c},{labels[c]}" for c in range(n)]
    lines.append(f"{profile.num_voters},{profile.num_voters},{len(counts)}")
    for order, count in counts.items():
        lines.append(f"{count}: " + ",".join(str(c) for c in order))
    return "\n".join(lines) + "\n"


def read_profile(path: str) -> Profile:
    with open(path, "r", encoding="utf-8") as fh:
        profile, _ = parse_profile(fh.read())
    return profile


def write_profile(
    profile: Profile, path: str, labels: Optional[Sequence[str]] = None
) -> None:
    _atomic_write_text(path, format_profile(profile, labels))


# ---------------------------------------------------------------------------
# results CSV
# ---------------------------------------------------------------------------

def _fmt_float(x: Optional[float]) -> str:
    return "" if x is None else format(x, ".17g")


def _fmt_opt_int(x: Optional[int]) -> str:
    return "" if x is None else str(x)


def format_results(rows: Iterable[EstimateRow]) -> str:
    out = [RESULTS_HEADER]
    for r in sorted(rows, key=EstimateRow.sort_key):
        t = r.tally
        out.append(",".join([
            r.paradigm, r.measure, r.model, r.method, r.variant, r.comparison,
            str(r.candidates), str(r.voters),
            _fmt_float(r.coalition_frac),
            _fmt_opt_int(r.coalition_size_even), _fmt_opt_int(r.coalition_size_odd),
            str(t.trials), str(t.skipped), str(t.cond_hits),
            str(t.num_event), str(t.num_base), str(t.den_event), str(t.den_base),
            _fmt_float(r.estimate), _fmt_float(r.stderr), str(r.seed),
        ]))
    return "\n".join(out) + "\n"


def write_results(rows: Iterable[EstimateRow], path: str) -> None:
    _atomic_write_text(path, format_results(rows))


def read_results(path: str) -> List[EstimateRow]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        expected = RESULTS_HEADER.split(",")
        if reader.fieldnames != expected:
            raise ValueError(f"unexpected results header: {reader.fieldnames}")
        rows = []
        for rec in reader:
            tally = TrialTally(
                trials=int(rec["trials"]), skipped=int(rec["skipped"]),
                cond_hits=int(rec["cond_hits"]),
                num_event=int(rec["num_event"]), num_base=int(rec["num_base"]),
                den_event=int(rec["den_event"]), den_base=int(rec["den_base"]),
            )
            rows.append(EstimateRow(
                paradigm=rec["paradigm"], measure=rec["measure"],
                model=rec["model"], method=rec["method"], variant=rec["variant"],
                comparison=rec["comparison"],
                candidates=int(rec["candidates"]), voters=int(rec["voters"]),
                coalition_frac=(
                    float(rec["coalition_frac"]) if rec["coalition_frac"] else None
                ),
                coalition_size_even=(
                    int(rec["coalition_size_even"])
                    if rec["coalition_size_even"] else None
                ),
                coalition_size_odd=(
                    int(rec["coalition_size_odd"])
                    if rec["coalition_size_odd"] else None
                ),
                tally=tally,
                estimate=float(rec["estimate"]) if rec["estimate"] else None,
                stderr=float(rec["stderr"]) if rec["stderr"] else None,
                seed=int(rec["seed"]),
            ))
    return rows


def _atomic_write_text(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


# ---------------------------------------------------------------------------
# run configuration
# ---------------------------------------------------------------------------

_CONFIG_KEYS = {
    "paradigms", "models", "methods", "comparisons", "candidates", "voters",
    "trials", "coalition_fracs", "seed", "rp_cap", "coalition_draw",
    "workers", "exhaustive", "measures",
}

_LIST_KEYS = {
    "paradigms", "models", "methods", "comparisons", "candidates", "voters",
    "coalition_fracs", "measures",
}


def config_from_mapping(data: Dict) -> SimulationConfig:
    if not isinstance(data, dict):
        raise ValueError("configuration must be a mapping")
    unknown = set(data) - _CONFIG_KEYS
    if unknown:
        raise ValueError(
            f"unknown config keys: {sorted(unknown)}; "
            f"valid keys: {sorted(_CONFIG_KEYS)}"
        )
    kwargs = {}
    for key, value in data.items():
        if key in _LIST_KEYS:
            if not isinstance(value, (list, tuple)):
                value = [value]
            kwargs[key] = tuple(value)
        else:
            kwargs[key] = value
    return SimulationConfig(**kwargs)


def load_config(path: str) -> SimulationConfig:
    with open(path, "r", encoding="utf-8") as fh:
        data = yaml.safe_load(fh)
    return config_from_mapping(data or {})
