"""On-disk formats: state files (JSON) and bare covariance matrices (CSV).

The canonical convention is pinned in the file header: shot noise 1/2 and
interleaved quadrature ordering.  Files declaring a different shot-noise
unit are rejected unless the caller explicitly asks for a rescale; any
other ordering is rejected outright.  Floats are written with full repr
precision, so save -> load round-trips are bit-exact.
"""

import csv
import json
import math

from .core import (
    SHOT_NOISE,
    GaussianState,
    ModeLabel,
    ModeRegister,
    validate,
)
from .errors import ConventionMismatch, ParseError, PhysicalityViolation

ORDERING = "interleaved"


def state_to_dict(state):
    return {
        "convention": {"sn": SHOT_NOISE, "ordering": ORDERING},
        "register": [
            {"tag": m.tag, "polarization": m.polarization, "oam": m.oam}
            for m in state.register
        ],
        "mean": list(state.mean),
        "cov": [list(row) for row in state.cov],
    }


def _require(mapping, key, where):
    if key not in mapping:
        raise ParseError(f"missing section {key!r} in {where}")
    return mapping[key]


def _parse_register(entries):
    modes = []
    for k, entry in enumerate(entries):
        try:
            modes.append(
                ModeLabel(
                    _require(entry, "polarization", f"register[{k}]"),
                    _require(entry, "oam", f"register[{k}]"),
                    _require(entry, "tag", f"register[{k}]"),
                )
            )
        except (ValueError, TypeError) as exc:
            raise ParseError(f"register[{k}]: {exc}") from exc
    try:
        return ModeRegister(tuple(modes))
    except Exception as exc:
        raise ParseError(f"register: {exc}") from exc


def state_from_dict(data, require_physical=True, rescale=False, where="state"):
    """Build a state from the parsed file dict.

    ``rescale`` accepts files with sn != 1/2 by scaling the covariance
    (linearly) and the mean (by sqrt) into the canonical unit; otherwise
    such files raise ConventionMismatch.
    """
    if not isinstance(data, dict):
        raise ParseError(f"{where}: top level must be an object")
    convention = _require(data, "convention", where)
    sn = _require(convention, "sn", f"{where}.convention")
    ordering = _require(convention, "ordering", f"{where}.convention")
    try:
        sn = float(sn)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{where}.convention.sn: not a number") from exc
    if sn <= 0:
        raise ParseError(f"{where}.convention.sn must be > 0, got {sn}")
    if ordering != ORDERING:
        raise ConventionMismatch(
            f"unsupported quadrature ordering {ordering!r}; this toolkit "
            f"reads {ORDERING!r} files only"
        )

    register = _parse_register(_require(data, "register", where))
    n = len(register)
    mean = _require(data, "mean", where)
    cov = _require(data, "cov", where)
    try:
        mean = [float(v) for v in mean]
        cov = [[float(v) for v in row] for row in cov]
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{where}: mean/cov entries must be numbers") from exc
    if not all(math.isfinite(v) for v in mean) or not all(
        math.isfinite(v) for row in cov for v in row
    ):
        raise ParseError(f"{where}: mean/cov entries must be finite")
    if len(mean) != 2 * n:
        raise ParseError(
            f"{where}: mean has length {len(mean)}, register implies {2 * n}"
        )
    if len(cov) != 2 * n or any(len(row) != 2 * n for row in cov):
        raise ParseError(
            f"{where}: cov is not a {2 * n}x{2 * n} row-major matrix"
        )

    state = GaussianState(register, mean, cov)
    if not math.isclose(sn, SHOT_NOISE, rel_tol=0.0, abs_tol=1e-12):
        if not rescale:
            raise ConventionMismatch(
                f"file uses sn = {sn}, toolkit convention is {SHOT_NOISE}; "
                "pass rescale=True (CLI: --rescale) to convert on load"
            )
        factor = SHOT_NOISE / sn
        state = GaussianState(
            register, state.mean * math.sqrt(factor), state.cov * factor
        )

    if require_physical:
        report = validate(state)
        if not report.symmetric:
            raise PhysicalityViolation(
                f"{where}: covariance matrix is not symmetric within 1e-10"
            )
        if not report.physical:
            raise PhysicalityViolation(
                f"{where}: covariance matrix violates the Heisenberg bound "
                f"(min eigenvalue {report.min_heisenberg_eigenvalue:.3e})",
                min_eigenvalue=report.min_heisenberg_eigenvalue,
            )
    return state


def load_state(path, require_physical=True, rescale=False):
    """Load a state file; see :func:`state_from_dict` for the knobs."""
    with open(path, encoding="utf-8") as handle:
        try:
            data = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ParseError(
                f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}"
            ) from exc
    return state_from_dict(
        data, require_physical=require_physical, rescale=rescale, where=str(path)
    )


def save_state(state, path):
    """Write a state file (UTF-8 JSON, full float precision)."""
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(state_to_dict(state), handle, indent=2)
        handle.write("\n")


def load_cov_csv(path, register, require_physical=True):
    """Read a bare covariance matrix from CSV; the register comes by flag.

    Rows of decimal floats, one matrix row per line; mean is zero and the
    canonical convention is assumed.
    """
    rows = []
    with open(path, encoding="utf-8", newline="") as handle:
        for lineno, row in enumerate(csv.reader(handle), start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            try:
                rows.append([float(cell) for cell in row])
            except ValueError as exc:
                raise ParseError(f"{path}: line {lineno}: {exc}") from exc
    n = len(register)
    if len(rows) != 2 * n or any(len(r) != 2 * n for r in rows):
        raise ParseError(
            f"{path}: expected a {2 * n}x{2 * n} matrix for the "
            f"{n}-mode register, got {len(rows)} rows"
        )
    data = {
        "convention": {"sn": SHOT_NOISE, "ordering": ORDERING},
        "register": [
            {"tag": m.tag, "polarization": m.polarization, "oam": m.oam}
            for m in register
        ],
        "mean": [0.0] * (2 * n),
        "cov": rows,
    }
    return state_from_dict(data, require_physical=require_physical, where=str(path))


def parse_register_spec(spec):
    """Parse a CLI register spec like ``a:H:0,b:V:0`` into a register."""
    modes = []
    for part in spec.split(","):
        fields = part.strip().split(":")
        if len(fields) != 3:
            raise ParseError(
                f"register spec entry {part!r} is not tag:polarization:oam"
            )
        tag, pol, oam = fields
        try:
            modes.append(ModeLabel(pol, int(oam), tag))
        except ValueError as exc:
            raise ParseError(f"register spec entry {part!r}: {exc}") from exc
    try:
        return ModeRegister(tuple(modes))
    except Exception as exc:
        raise ParseError(f"register spec: {exc}") from exc
