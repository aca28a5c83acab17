"""Least-squares estimation of CI, CIF, ABG and dual-slope parameters.

Every fit minimizes squared error in dB. Distances are 3D; records carrying
2D distances must be converted with :func:`to_3d` first (the CSV reader does
this when heights are given and refuses otherwise).
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence

import numpy as np

from .core import DomainError, derive_d3d
from .pathloss import ABGParams, CIFParams, CIParams, DualSlopeParams


class MeasurementFormatError(DomainError):
    """Malformed measurement CSV; the message carries the line number."""


@dataclass(frozen=True)
class MeasurementRecord:
    fc: float  # GHz
    d: float  # m
    pl: float  # dB
    d_kind: str = "3d"

    def __post_init__(self):
        for name in ("fc", "d", "pl"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not (math.isfinite(self.fc) and self.fc > 0):
            raise DomainError(f"fc must be finite and > 0 GHz (got {self.fc})")
        if not (math.isfinite(self.d) and self.d >= 1.0):
            raise DomainError(f"d must be >= 1 m (got {self.d})")
        if not math.isfinite(self.pl):
            raise DomainError("path loss must be finite")
        if self.d_kind not in ("2d", "3d"):
            raise DomainError(f"d_kind must be '2d' or '3d' (got {self.d_kind!r})")


@dataclass(frozen=True)
class FitResult:
    """Fitted parameters plus residual statistics.

    ``params`` is the same parameter type the path loss module evaluates, so
    ``pl_ci(fc, d, result.params)`` reproduces the fitted curve.
    """

    family: str
    params: object
    sigma: float
    residuals: np.ndarray = field(repr=False)
    n: int

    @property
    def sse(self):
        return float(np.dot(self.residuals, self.residuals))

    def parameters(self):
        """Flat ``name -> value`` view of the fitted parameters (no sigma)."""
        p = self.params
        if self.family == "ci":
            return {"n": p.n}
        if self.family == "cif":
            return {"n": p.n, "b": p.b, "f0": p.f0}
        if self.family == "abg":
            return {"alpha": p.alpha, "beta": p.beta, "gamma": p.gamma}
        if self.family == "dual-cif":
            return {"n1": p.first.n, "b1": p.first.b, "n2": p.second.n, "b2": p.second.b,
                    "f0": p.first.f0, "dbp": p.dbp}
        return {"alpha1": p.first.alpha, "beta1": p.first.beta, "gamma": p.first.gamma,
                "alpha2": p.second.alpha, "dbp": p.dbp}


def to_3d(records: Iterable[MeasurementRecord], h_bs=None, h_ue=None) -> List[MeasurementRecord]:
    """Convert 2D-distance records to 3D; heights are required if any exist."""
    out = []
    for r in records:
        if r.d_kind == "3d":
            out.append(r)
            continue
        if h_bs is None or h_ue is None:
            raise DomainError("records with 2D distances need hBS and hUE for conversion")
        out.append(MeasurementRecord(r.fc, derive_d3d(r.d, h_bs, h_ue), r.pl, "3d"))
    return out


def _arrays(records, minimum):
    records = list(records)
    if len(records) < minimum:
        raise DomainError(f"need at least {minimum} records (got {len(records)})")
    if any(r.d_kind != "3d" for r in records):
        raise DomainError("records with 2D distances must be converted with to_3d() first")
    fc = np.array([r.fc for r in records])
    d = np.array([r.d for r in records])
    pl = np.array([r.pl for r in records])
    return fc, d, pl


def _fspl(fc):
    return 32.4 + 20.0 * np.log10(fc)


def _result(family, params, residuals):
    residuals = np.asarray(residuals, dtype=float)
    residuals.setflags(write=False)
    sigma = float(math.sqrt(np.mean(residuals * residuals)))
    return FitResult(family, params, sigma, residuals, int(residuals.size))


def _lstsq(x, y, names):
    """Least squares with an explicit rank check naming the lost parameters."""
    rank = np.linalg.matrix_rank(x)
    if rank < x.shape[1]:
        raise DomainError(f"rank-deficient design: {names} not identifiable from these records")
    coef, *_ = np.linalg.lstsq(x, y, rcond=None)
    return coef


def fit_ci(records) -> FitResult:
    """Closed-form CI exponent: n = sum(y log d) / (10 sum(log d)^2)."""
    fc, d, pl = _arrays(records, 2)
    if np.unique(d).size < 2:
        raise DomainError("CI fit needs at least two distinct distances")
    ld = np.log10(d)
    denom = float(np.dot(ld, ld))
    if denom == 0.0:
        raise DomainError("degenerate design: all distances are 1 m, n is unidentifiable")
    y = pl - _fspl(fc)
    n = float(np.dot(y, ld)) / (10.0 * denom)
    res = y - 10.0 * n * ld
    fit = _result("ci", None, res)
    return FitResult("ci", CIParams(n, fit.sigma), fit.sigma, fit.residuals, fit.n)


def fit_abg(records) -> FitResult:
    """Ordinary least squares on ``[10 log10 d, 1, 10 log10 fc]``."""
    fc, d, pl = _arrays(records, 3)
    if np.unique(fc).size < 2:
        raise DomainError("single-frequency data: gamma is not identifiable (collinear with beta)")
    if np.unique(d).size < 2:
        raise DomainError("single-distance data: alpha is not identifiable (collinear with beta)")
    x = np.column_stack([10.0 * np.log10(d), np.ones_like(d), 10.0 * np.log10(fc)])
    alpha, beta, gamma = _lstsq(x, pl, "alpha, beta, gamma")
    res = pl - x @ np.array([alpha, beta, gamma])
    fit = _result("abg", None, res)
    return FitResult("abg", ABGParams(float(alpha), float(beta), float(gamma), fit.sigma),
                     fit.sigma, fit.residuals, fit.n)


def weighted_mean_frequency(records, weights=None):
    """f0 for CIF fits: record-count weighted mean unless ``weights`` given."""
    fc = np.array([r.fc for r in records])
    if weights is None and np.all(fc == fc[0]):
        return float(fc[0])
    return float(np.average(fc, weights=weights))


def fit_cif(records, f0=None) -> FitResult:
    """CIF fit with ``f0`` fixed (default: mean frequency over records).

    Single-frequency data reduce to the CI fit with ``b = 0``.
    """
    records = list(records)
    fc, d, pl = _arrays(records, 2)
    f0 = weighted_mean_frequency(records) if f0 is None else float(f0)
    if f0 <= 0:
        raise DomainError("f0 must be > 0 GHz")
    ld = 10.0 * np.log10(d)
    rel = (fc - f0) / f0
    y = pl - _fspl(fc)
    if np.all(rel == 0.0):
        ci = fit_ci(records)
        return FitResult("cif", CIFParams(ci.params.n, 0.0, f0, ci.sigma), ci.sigma, ci.residuals, ci.n)
    x = np.column_stack([ld, rel * ld])
    n, nb = _lstsq(x, y, "n, n*b")
    if n == 0.0:
        raise DomainError("fitted n = 0; b cannot be recovered")
    res = y - x @ np.array([n, nb])
    fit = _result("cif", None, res)
    return FitResult("cif", CIFParams(float(n), float(nb / n), f0, fit.sigma),
                     fit.sigma, fit.residuals, fit.n)


def _dual_design(family, fc, d, dbp, f0):
    near = 10.0 * np.log10(np.minimum(d, dbp))
    far = 10.0 * np.log10(np.maximum(d, dbp) / dbp)
    if family == "cif":
        rel = (fc - f0) / f0
        if np.all(rel == 0.0):
            return np.column_stack([near, far]), "n1, n2"
        return np.column_stack([near, rel * near, far, rel * far]), "n1, b1, n2, b2"
    return np.column_stack([near, np.ones_like(d), 10.0 * np.log10(fc), far]), "alpha1, beta1, gamma, alpha2"


def _dual_params(family, coef, f0, dbp, sigma):
    if family == "cif":
        if coef.size == 2:
            n1, n2 = coef
            b1 = b2 = 0.0
        else:
            n1, nb1, n2, nb2 = coef
            if n1 == 0.0 or n2 == 0.0:
                raise DomainError("fitted exponent is 0; b cannot be recovered")
            b1, b2 = nb1 / n1, nb2 / n2
        return DualSlopeParams.cif(float(n1), float(b1), float(n2), float(b2), f0, dbp, sigma)
    a1, b1, g, a2 = coef
    return DualSlopeParams.abg(float(a1), float(b1), float(g), float(a2), dbp, sigma)


def fit_dual_slope(records, family, dbp_candidates: Sequence[float], f0=None) -> FitResult:
    """Continuous two-slope fit; the breakpoint is chosen from ``dbp_candidates``.

    For each candidate the model is linear in its parameters (continuity is
    built into the regressors), so each is an ordinary least-squares solve.
    The candidate with the smallest SSE wins; ties keep the earlier one.
    """
    family = str(family).lower().replace("dual-", "")
    if family not in ("cif", "abg"):
        raise DomainError(f"dual-slope family must be 'cif' or 'abg' (got {family!r})")
    records = list(records)
    fc, d, pl = _arrays(records, 6)
    if family == "cif":
        f0 = weighted_mean_frequency(records) if f0 is None else float(f0)
        y = pl - _fspl(fc)
    else:
        if np.unique(fc).size < 2:
            raise DomainError("single-frequency data: gamma is not identifiable (collinear with beta1)")
        y = pl
    best = None
    for dbp in dbp_candidates:
        dbp = float(dbp)
        if not dbp > 1.0:
            raise DomainError(f"breakpoint candidates must exceed 1 m (got {dbp:g})")
        if not (np.any(d < dbp) and np.any(d > dbp)):
            continue
        x, names = _dual_design(family, fc, d, dbp, f0)
        if np.linalg.matrix_rank(x) < x.shape[1]:
            continue
        coef = _lstsq(x, y, names)
        res = y - x @ coef
        sse = float(np.dot(res, res))
        if best is None or sse < best[0]:
            best = (sse, dbp, coef, res)
    if best is None:
        raise DomainError("no breakpoint candidate has identifiable data on both sides")
    _, dbp, coef, res = best
    fit = _result("dual-" + family, None, res)
    return FitResult(fit.family, _dual_params(family, coef, f0, dbp, fit.sigma),
                     fit.sigma, fit.residuals, fit.n)


# --------------------------------------------------------------------------
# CSV input

_REQUIRED = ("fc_ghz", "d_m", "pl_db")


def _open_text(source):
    if isinstance(source, io.TextIOBase) or hasattr(source, "read"):
        return source, False
    return open(source, newline="", encoding="utf-8"), True


def read_measurements(source, h_bs=None, h_ue=None) -> List[MeasurementRecord]:
    """Parse a measurement CSV (``fc_ghz,d_m,pl_db[,d_kind]``).

    Any malformed row raises :class:`MeasurementFormatError` naming its line.
    2D rows are converted with the given heights.
    """
    fh, close = _open_text(source)
    try:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise MeasurementFormatError("line 1: empty file, expected header fc_ghz,d_m,pl_db")
        header = [h.strip() for h in header]
        missing = [c for c in _REQUIRED if c not in header]
        unknown = [c for c in header if c not in _REQUIRED + ("d_kind",)]
        if missing or unknown or len(set(header)) != len(header):
            raise MeasurementFormatError(
                f"line 1: header must be fc_ghz,d_m,pl_db[,d_kind] (got {','.join(header)})"
            )
        col = {name: header.index(name) for name in header}
        records = []
        for row in reader:
            line = reader.line_num
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise MeasurementFormatError(f"line {line}: expected {len(header)} fields, got {len(row)}")
            try:
                kind = row[col["d_kind"]].strip().lower() if "d_kind" in col else "3d"
                records.append(MeasurementRecord(
                    float(row[col["fc_ghz"]]), float(row[col["d_m"]]), float(row[col["pl_db"]]), kind,
                ))
            except ValueError as exc:
                raise MeasurementFormatError(f"line {line}: {exc}") from None
        if not records:
            raise MeasurementFormatError("no data rows")
    finally:
        if close:
            fh.close()
    try:
        return to_3d(records, h_bs, h_ue)
    except DomainError as exc:
        raise MeasurementFormatError(str(exc)) from None


def read_sweep_column(source, column, fc) -> List[MeasurementRecord]:
    """Turn one model column of a sweep CSV (``d_m,<model>...``) into records."""
    fh, close = _open_text(source)
    try:
        reader = csv.reader(fh)
        header = [h.strip() for h in (next(reader, None) or [])]
        if not header or header[0] != "d_m":
            raise MeasurementFormatError("line 1: sweep CSV must start with a d_m column")
        if column not in header[1:]:
            raise MeasurementFormatError(f"line 1: column {column!r} not found")
        k = header.index(column)
        records = []
        for row in reader:
            if not row:
                continue
            try:
                records.append(MeasurementRecord(fc, float(row[0]), float(row[k])))
            except (ValueError, IndexError) as exc:
                raise MeasurementFormatError(f"line {reader.line_num}: {exc}") from None
    finally:
        if close:
            fh.close()
    return records


def write_measurements(records: Iterable[MeasurementRecord], fh: Optional[io.TextIOBase] = None):
    """Write records as CSV with shortest round-trip number formatting."""
    out = fh if fh is not None else io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["fc_ghz", "d_m", "pl_db", "d_kind"])
    for r in records:
        w.writerow([repr(r.fc), repr(r.d), repr(r.pl), r.d_kind])
    return out.getvalue() if fh is None else None
