"""Grid scans of secant dimensions with deterministic, sorted output."""
from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Iterator

from .ring import FieldConfig
from .terracini import MonomialSpec, SecantReport, ambient_dim, expected_secant_dim, secant_dim

CSV_COLUMNS = ("n", "monomial", "s", "computed_dim", "expected_dim", "defect", "trials", "prime", "seed")


def _partitions(d: int, r: int, largest: int) -> Iterator[tuple[int, ...]]:
    if r == 1:
        if 1 <= d <= largest:
            yield (d,)
        return
    for a in range(min(d - r + 1, largest), 0, -1):
        if a * r < d:
            break
        for rest in _partitions(d - a, r - 1, a):
            yield (a,) + rest


def partitions(d: int, r: int) -> list[MonomialSpec]:
    """All shapes with exactly r positive exponents summing to d, lex-descending."""
    if not 1 <= r <= d:
        raise ValueError(f"need 1 <= r <= d, got r={r}, d={d}")
    return [MonomialSpec(p) for p in _partitions(d, r, d)]


def fill_s(n: int, spec: MonomialSpec) -> int:
    """Smallest s whose expected secant dimension is the whole ambient space."""
    top = ambient_dim(n, spec.d)
    s = 1
    while expected_secant_dim(n, spec, s) < top:
        s += 1
    return s


@dataclass(frozen=True)
class ScanRange:
    n_min: int
    n_max: int
    d_min: int
    d_max: int
    r_min: int = 2
    r_max: int | None = None  # defaults to d_max
    s_max: int | None = None  # None: up to fill + 1
    trials: int = 3
    s_min: int = 1

    def __post_init__(self):
        if self.r_max is None:
            object.__setattr__(self, "r_max", self.d_max)
        problems = []
        if not 2 <= self.n_min <= self.n_max:
            problems.append(f"need 2 <= n_min <= n_max, got {self.n_min}..{self.n_max}")
        if not 3 <= self.d_min <= self.d_max:
            problems.append(f"need 3 <= d_min <= d_max, got {self.d_min}..{self.d_max}")
        if self.r_min < 2:
            problems.append(f"need r_min >= 2, got {self.r_min}")
        if self.r_max > self.d_max:
            problems.append(f"need r_max <= d_max, got {self.r_max} > {self.d_max}")
        if self.s_max is not None and self.s_max < 1:
            problems.append(f"need s_max >= 1, got {self.s_max}")
        if self.s_min < 1:
            problems.append(f"need s_min >= 1, got {self.s_min}")
        if self.trials < 1:
            problems.append(f"need trials >= 1, got {self.trials}")
        if problems:
            raise ValueError("; ".join(problems))

    def cases(self) -> list[tuple[int, MonomialSpec, int]]:
        out = []
        for n in range(self.n_min, self.n_max + 1):
            for d in range(self.d_min, self.d_max + 1):
                for r in range(self.r_min, min(self.r_max, d) + 1):
                    for spec in partitions(d, r):
                        top = fill_s(n, spec) + 1
                        if self.s_max is not None:
                            top = min(top, self.s_max)
                        out.extend((n, spec, s) for s in range(self.s_min, top + 1))
        return out


@dataclass(frozen=True)
class ScanRow:
    n: int
    spec: str
    s: int
    computed_dim: int
    expected_dim: int
    defect: int
    trials: int
    prime: int
    seed: int

    @classmethod
    def from_report(cls, rep: SecantReport) -> ScanRow:
        return cls(rep.n, str(rep.spec), rep.s, rep.computed_dim, rep.expected_dim,
                   rep.defect, rep.trials, rep.prime, rep.seed)

    @property
    def monomial(self) -> MonomialSpec:
        return MonomialSpec.parse(self.spec)

    def sort_key(self):
        m = self.monomial
        return (self.n, m.d, m.r, tuple(-e for e in m.exps), self.s)

    def as_record(self) -> dict:
        rec = asdict(self)
        rec["monomial"] = rec.pop("spec")
        return {k: rec[k] for k in CSV_COLUMNS}


def _run_case(args) -> ScanRow:
    n, spec, s, trials, cfg = args
    return ScanRow.from_report(secant_dim(n, spec, s, trials, cfg))


def run_scan(grid: ScanRange, cfg: FieldConfig | None = None, jobs: int = 1) -> list[ScanRow]:
    """Evaluate every case of the range; output order never depends on ``jobs``."""
    cfg = cfg or FieldConfig()
    tasks = [(n, spec, s, grid.trials, cfg) for n, spec, s in grid.cases()]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_run_case, tasks, chunksize=8))
    else:
        rows = [_run_case(t) for t in tasks]
    return sorted(rows, key=ScanRow.sort_key)


def format_rows(rows: list[ScanRow], fmt: str = "csv") -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            rec = row.as_record()
            writer.writerow([rec[c] for c in CSV_COLUMNS])
        return buf.getvalue()
    if fmt == "json":
        return json.dumps([row.as_record() for row in rows], indent=2) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def read_csv(text: str) -> list[ScanRow]:
    rows = []
    for rec in csv.DictReader(io.StringIO(text)):
        rows.append(ScanRow(
            int(rec["n"]), rec["monomial"], int(rec["s"]), int(rec["computed_dim"]),
            int(rec["expected_dim"]), int(rec["defect"]), int(rec["trials"]),
            int(rec["prime"]), int(rec["seed"]),
        ))
    return rows
