"""Command-line front end.

Exit codes: 0 ok, 1 negative verdict, 2 invalid divisor, 3 no distinguished
element, 5 reference or golden-file mismatch, 64 usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .errors import CapExceeded, CubicLatError, NotDistinguished, NotHassett, ReferenceMismatch

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_NOT_HASSETT = 2
EXIT_NOT_DISTINGUISHED = 3
EXIT_MISMATCH = 5
EXIT_USAGE = 64

SCHEMA_VERSION = 1
_SAFE_INT = 2**53


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class GramFile:
    rank: int
    gram: tuple[tuple[int, ...], ...]
    distinguished: tuple[int, ...] | None = None
    label: str | None = None

    def to_json(self) -> str:
        obj: dict[str, Any] = {"rank": self.rank, "gram": [list(r) for r in self.gram]}
        if self.distinguished is not None:
            obj["distinguished"] = list(self.distinguished)
        if self.label is not None:
            obj["label"] = self.label
        enc = _Encoder()
        obj = enc(obj)
        if enc.big:
            obj["big_ints_as_strings"] = True
        return _dumps(obj)

    @classmethod
    def from_json(cls, text: str) -> "GramFile":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"not valid JSON: {exc}") from exc
        if not isinstance(obj, dict) or "gram" not in obj:
            raise UsageError("a Gram file is a JSON object with a 'gram' entry")
        gram = tuple(tuple(_as_int(x) for x in row) for row in obj["gram"])
        n = len(gram)
        rank = _as_int(obj.get("rank", n))
        if rank != n or any(len(r) != n for r in gram):
            raise UsageError("'rank' does not match the Gram matrix")
        if any(gram[i][j] != gram[j][i] for i in range(n) for j in range(n)):
            raise UsageError("Gram matrix is not symmetric")
        dist = obj.get("distinguished")
        if dist is not None:
            dist = tuple(_as_int(x) for x in dist)
            if len(dist) != n:
                raise UsageError("'distinguished' has the wrong length")
        label = obj.get("label")
        return cls(rank, gram, dist, label)

    @classmethod
    def read(cls, path: str | Path) -> "GramFile":
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise UsageError(str(exc)) from exc
        return cls.from_json(text)

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json())

    def lattice(self):
        from .lattice import Lattice

        try:
            return Lattice(self.gram, label=self.label)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc


def _as_int(x) -> int:
    if isinstance(x, bool):
        raise UsageError("booleans are not integers")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x)
        except ValueError:
            pass
    raise UsageError(f"expected an integer, got {x!r}")


class _Encoder:
    def __init__(self) -> None:
        self.big = False

    def __call__(self, obj):
        if isinstance(obj, bool) or obj is None or isinstance(obj, str):
            return obj
        if isinstance(obj, int):
            if abs(obj) >= _SAFE_INT:
                self.big = True
                return str(obj)
            return obj
        if isinstance(obj, Fraction):
            return str(obj)
        if isinstance(obj, dict):
            return {str(k): self(v) for k, v in obj.items()}
        if isinstance(obj, (list, tuple)):
            return [self(v) for v in obj]
        raise TypeError(f"cannot serialise {type(obj).__name__}")


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def encode_report(report: dict) -> str:
    enc = _Encoder()
    body = enc(report)
    if enc.big:
        body["big_ints_as_strings"] = True
    return _dumps(body)


def _matrix_text(m: Sequence[Sequence], indent: str = "  ") -> str:
    cells = [[str(x) for x in row] for row in m]
    width = max((len(c) for row in cells for c in row), default=1)
    return "\n".join(indent + " ".join(c.rjust(width) for c in row) for row in cells)


def _is_matrix(v) -> bool:
    return (
        isinstance(v, (list, tuple)) and v and all(isinstance(r, (list, tuple)) for r in v)
        and all(isinstance(x, (int, Fraction)) and not isinstance(x, bool) for r in v for x in r)
    )


def render_text(value, indent: str = "") -> str:
    lines = []
    if isinstance(value, dict):
        for k in sorted(value):
            v = value[k]
            if _is_matrix(v):
                lines.append(f"{indent}{k}:")
                lines.append(_matrix_text(v, indent + "  "))
            elif isinstance(v, dict) or (isinstance(v, list) and v and isinstance(v[0], dict)):
                lines.append(f"{indent}{k}:")
                lines.append(render_text(v, indent + "  "))
            else:
                lines.append(f"{indent}{k}: {_scalar(v)}")
    elif isinstance(value, list):
        for i, item in enumerate(value):
            lines.append(f"{indent}[{i}]")
            lines.append(render_text(item, indent + "  "))
    else:
        lines.append(indent + _scalar(value))
    return "\n".join(lines)


def _scalar(v) -> str:
    if isinstance(v, (list, tuple)):
        return "(" + ", ".join(_scalar(x) for x in v) + ")"
    return str(v)


# commands: each returns (result dict, tags, exit code)


def _component_dict(c) -> dict:
    return {
        "gram": c.gram,
        "disc": c.disc,
        "distinguished": c.distinguished,
        "provenance": c.provenance.as_dict(),
    }


def _component_report_dict(rep) -> dict:
    return {
        "count": len(rep.components),
        "discs": sorted(rep.discs),
        "components": [_component_dict(c) for c in rep.components],
        "families_examined": rep.families_examined,
        "dedup_log": list(rep.dedup_log),
    }


def _distinguished_of(gf: GramFile, lat):
    from .lattice import distinguished_elements, is_distinguished

    if gf.distinguished is not None:
        try:
            ok = is_distinguished(lat, gf.distinguished)
        except CubicLatError:
            ok = False
        if not ok:
            raise NotDistinguished(gf.distinguished)
        return gf.distinguished
    from .exact import is_positive_definite

    if not is_positive_definite(lat.gram):
        raise UsageError("Gram matrix is not positive definite")
    found = distinguished_elements(lat)
    if not found:
        raise NotDistinguished(None)
    return found[0]


def cmd_lattice_info(args) -> tuple[dict, list[str], int]:
    from .exact import is_positive_definite
    from .lattice import canonical_gram, disc_group, distinguished_elements, has_roots, minimum, parity

    gf = GramFile.read(args.file)
    lat = gf.lattice()
    group = disc_group(lat)
    out: dict[str, Any] = {
        "rank": lat.rank,
        "gram": lat.gram,
        "disc": lat.disc,
        "invariant_factors": list(group.invariant_factors),
        "length": group.length,
        "parity": parity(lat).value,
        "positive_definite": is_positive_definite(lat.gram),
    }
    if gf.label is not None:
        out["label"] = gf.label
    if out["positive_definite"]:
        out["minimum"] = minimum(lat)
        out["has_roots"] = has_roots(lat)
        out["distinguished_elements"] = distinguished_elements(lat)
        if lat.rank <= 6:
            out["canonical_gram"] = canonical_gram(lat)
    return out, ["lattice-invariants"], EXIT_OK


def cmd_intersect(args) -> tuple[dict, list[str], int]:
    from .moduli import intersect_divisors, rootfree_count_bounds

    rep = intersect_divisors(args.d1, args.d2, threads=args.threads)
    bound = rootfree_count_bounds(args.d1, args.d2)
    out = _component_report_dict(rep)
    out["rootfree_bound"] = {"D": bound.D, "lower": bound.lower, "upper": bound.upper, "case": bound.case}
    return out, ["two-divisor-intersection", "rootfree-count-bound"], EXIT_OK


def cmd_intersect_many(args) -> tuple[dict, list[str], int]:
    from .moduli import intersect_many

    rep = intersect_many(args.ds, threads=args.threads)
    return _component_report_dict(rep), ["iterated-intersection"], EXIT_OK


def cmd_admissible(args) -> tuple[dict, list[str], int]:
    from .quadform import is_admissible

    gf = GramFile.read(args.file)
    lat = gf.lattice()
    o = _distinguished_of(gf, lat)
    v = is_admissible(lat, o)
    out: dict[str, Any] = {
        "admissible": v.admissible,
        "lambda": v.lam,
        "split": v.split,
        "mechanism": v.mechanism.value,
        "distinguished": o,
        "form": str(v.form),
        "primitive_form": str(v.primitive_form),
    }
    if v.witness is not None:
        out["witness"] = {"vector": v.witness[0], "disc": v.witness[1]}
    return out, ["admissibility"], EXIT_OK if v.admissible else EXIT_NEGATIVE


def cmd_catalog(args) -> tuple[dict, list[str], int]:
    from .moduli import cross_validate_catalog, divisor_catalog

    entries = divisor_catalog(args.which, args.n_max)
    rows = []
    mismatches = 0
    for e, verdict in cross_validate_catalog(entries):
        ok = verdict == e.admissible and e.disc == e.formula_disc
        mismatches += not ok
        rows.append({
            "parameters": list(e.parameters),
            "disc": e.disc,
            "admissible": e.admissible,
            "general_verdict": verdict,
        })
    out = {"family": args.which.upper(), "entries": rows, "count": len(rows), "mismatches": mismatches}
    return out, ["divisor-catalog"], EXIT_OK if mismatches == 0 else EXIT_MISMATCH


def cmd_report_hypotheses(args) -> tuple[dict, list[str], int]:
    from .moduli import hypothesis_report

    gf = GramFile.read(args.file)
    lat = gf.lattice()
    rep = hypothesis_report(lat, gf.distinguished)
    out = {
        "rank": rep.rank,
        "length": rep.length,
        "distinguished": rep.distinguished,
        "root_free": rep.root_free,
        "branches": list(rep.branches),
        "conclusion": rep.conclusion,
    }
    if rep.codimension is not None:
        out["codimension"] = rep.codimension
    return out, ["hypotheses"] + list(rep.branches), EXIT_OK if rep.branches else EXIT_NEGATIVE


def cmd_fermat(args) -> tuple[dict, list[str], int]:
    from . import fermat

    sub = args.fermat_command
    if sub == "planes":
        planes = fermat.all_planes()
        fl = fermat.fermat_lattice()
        idx = {p.label: fermat.find_plane(p) for p in fl.planes}
        out = {"count": len(planes), "planes": [str(p) for p in planes], "reference_indices": idx}
        return out, ["fermat-planes"], EXIT_OK
    if sub == "lattice":
        fl = fermat.fermat_lattice()
        from .exact import det

        out = {
            "gram": fl.gram,
            "det": det(fl.gram),
            "h2": fl.h2_coords,
            "labels": list(fl.plane_labels),
            "recovered": fl.recovered,
        }
        return out, ["fermat-lattice"], EXIT_OK
    if sub == "verify":
        out = verify_fermat()
        return out, ["fermat-verification"], EXIT_OK if out["all_pass"] else EXIT_MISMATCH
    if sub == "in-divisor":
        w = fermat.fermat_in_divisor(args.d)
        out = {"d": w.d, "vector": w.vector, "route": w.route}
        if w.coefficients is not None:
            out["coefficients"] = w.coefficients
        return out, ["fermat-divisor"], EXIT_OK
    if sub == "all-divisors":
        ws = fermat.all_divisors(args.n)
        out = {"n_max": args.n, "checked": len(ws), "result": "all pass"}
        return out, ["fermat-divisor"], EXIT_OK
    raise UsageError(f"unknown fermat subcommand {sub}")


def verify_fermat() -> dict:
    """Every check behind the Fermat lattice, as a flat record."""
    from . import _fermat_data as ref
    from . import fermat
    from .exact import bilinear, det
    from .lattice import Lattice, disc_group

    planes = fermat.all_planes()
    fl = fermat.fermat_lattice()
    table = fermat.pairing_table()
    n = len(planes)
    symmetric = all(table[i][j] == table[j][i] for i in range(n) for j in range(n))
    values_ok = all(table[i][i] == 3 for i in range(n)) and all(
        table[i][j] in (-1, 0, 1) for i in range(n) for j in range(n) if i != j
    )
    on_cubic = all(p.lies_on_fermat() for p in planes)
    classes = fermat.plane_classes()
    h2_ok = all(bilinear(fl.gram, fl.h2_coords, c) == 1 for c in classes)
    group = disc_group(Lattice(fl.gram))
    mx = fermat.verify_maximality()
    fermat.rank7_basis()
    checks = {
        "plane_count": len(planes),
        "planes_on_cubic": on_cubic,
        "pairing_table_symmetric": symmetric,
        "pairing_values_ok": values_ok,
        "gram_matches_reference": fl.gram == ref.REFERENCE_GRAM,
        "det": det(fl.gram),
        "invariant_factors": list(group.invariant_factors),
        "isotropic_elements": [list(x) for x in mx.isotropic_elements],
        "nontrivial_isotropic_subgroups": mx.nontrivial_isotropic_subgroups,
        "root_orthogonal_to_h2": list(mx.root),
        "reference_root_ok": mx.reference_root_ok,
        "h2": fl.h2_coords,
        "h2_matches_reference": fl.h2_coords == ref.REFERENCE_H2,
        "all_plane_classes_meet_h2_once": h2_ok,
        "recovered_planes": fl.recovered,
    }
    checks["all_pass"] = (
        len(planes) == 405 and on_cubic and symmetric and values_ok
        and checks["gram_matches_reference"] and checks["det"] == 27
        and checks["invariant_factors"] == [3, 9] and mx.ok and checks["h2_matches_reference"] and h2_ok
    )
    return checks


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text}")
    return v


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


_GLOBAL_DEFAULTS = {"json": False, "golden": None, "cap": None, "threads": 1, "timing": False}


def build_parser() -> argparse.ArgumentParser:
    # SUPPRESS keeps a subcommand from resetting a flag given before it
    common = _Parser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--json", action="store_true", help="print the JSON report")
    common.add_argument("--golden", metavar="PATH", help="compare the JSON report with PATH (written if missing)")
    common.add_argument("--cap", type=int, metavar="N", help="enumeration cap for discriminant groups")
    common.add_argument("--threads", type=int, metavar="N", help="worker threads")
    common.add_argument("--timing", action="store_true", help="include wall-clock time in the report")

    p = _Parser(prog="cubiclat", description="Lattice computations for special cubic fourfolds.", parents=[common])
    p.add_argument("--version", action="version", version=f"cubiclat {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    lat = sub.add_parser("lattice", parents=[common], help="lattice invariants")
    lsub = lat.add_subparsers(dest="lattice_command", parser_class=_Parser)
    lsub.required = True
    info = lsub.add_parser("info", parents=[common])
    info.add_argument("file")
    info.set_defaults(func=cmd_lattice_info)

    it = sub.add_parser("intersect", parents=[common], help="components of C_d1 and C_d2")
    it.add_argument("d1", type=_positive_int)
    it.add_argument("d2", type=_positive_int)
    it.set_defaults(func=cmd_intersect)

    im = sub.add_parser("intersect-many", parents=[common], help="components of several Hassett divisors")
    im.add_argument("ds", type=_positive_int, nargs="+")
    im.set_defaults(func=cmd_intersect_many)

    ad = sub.add_parser("admissible", parents=[common], help="admissibility of a lattice")
    ad.add_argument("file")
    ad.set_defaults(func=cmd_admissible)

    cat = sub.add_parser("catalog", parents=[common], help="rank-3 divisors in C_8 or C_18")
    cat.add_argument("which", choices=["c8", "c18"])
    cat.add_argument("--n-max", type=int, default=20, dest="n_max")
    cat.set_defaults(func=cmd_catalog)

    fe = sub.add_parser("fermat", parents=[common], help="the Fermat cubic fourfold")
    fsub = fe.add_subparsers(dest="fermat_command", parser_class=_Parser)
    fsub.required = True
    for name in ("planes", "lattice", "verify"):
        fsub.add_parser(name, parents=[common]).set_defaults(func=cmd_fermat)
    fi = fsub.add_parser("in-divisor", parents=[common])
    fi.add_argument("d", type=_positive_int)
    fi.set_defaults(func=cmd_fermat)
    fa = fsub.add_parser("all-divisors", parents=[common])
    fa.add_argument("n", type=_positive_int)
    fa.set_defaults(func=cmd_fermat)

    rh = sub.add_parser("report-hypotheses", parents=[common], help="which existence criteria apply")
    rh.add_argument("file")
    rh.set_defaults(func=cmd_report_hypotheses)
    return p


def _argv_echo(argv: Sequence[str]) -> list[str]:
    skip_next = False
    out = []
    for a in argv:
        if skip_next:
            skip_next = False
            continue
        if a in ("--golden", "--threads"):
            skip_next = True
            continue
        if a.startswith(("--golden=", "--threads=")) or a in ("--json", "--timing"):
            continue
        out.append(a)
    return out


def run(argv: Sequence[str]) -> tuple[int, str, str]:
    """Execute a command; returns (exit code, stdout text, stderr text)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (int(exc.code or 0), "", "")
    for name, value in _GLOBAL_DEFAULTS.items():
        if not hasattr(args, name):
            setattr(args, name, value)
    if args.threads < 1:
        return EXIT_USAGE, "", "--threads must be positive\n"
    saved = os.environ.get("CUBICLAT_CAP")
    if args.cap is not None:
        os.environ["CUBICLAT_CAP"] = str(args.cap)
    try:
        return _execute(args, argv)
    finally:
        if saved is None:
            os.environ.pop("CUBICLAT_CAP", None)
        else:
            os.environ["CUBICLAT_CAP"] = saved


def _execute(args, argv: Sequence[str]) -> tuple[int, str, str]:
    start = time.perf_counter()
    try:
        result, tags, code = args.func(args)
    except UsageError as exc:
        return EXIT_USAGE, "", f"error: {exc}\n"
    except NotHassett as exc:
        return EXIT_NOT_HASSETT, "", f"error: {exc}\n"
    except NotDistinguished as exc:
        return EXIT_NOT_DISTINGUISHED, "", f"error: no distinguished element ({exc})\n"
    except ReferenceMismatch as exc:
        return EXIT_MISMATCH, "", f"error: reference mismatch: {exc}\n"
    except CapExceeded as exc:
        return EXIT_USAGE, "", f"error: {exc}\n"
    report: dict[str, Any] = {
        "schema": SCHEMA_VERSION,
        "command": _argv_echo(argv),
        "exit_code": code,
        "tags": tags,
        "result": result,
    }
    err = ""
    if args.golden:
        text = encode_report(report)
        path = Path(args.golden)
        if path.exists():
            if path.read_text() != text:
                code = EXIT_MISMATCH
                err = f"error: report differs from golden file {path}\n"
        else:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text)
    if args.timing:
        report["timing_seconds"] = round(time.perf_counter() - start, 3)
    out = encode_report(report) if args.json else render_text(report) + "\n"
    return code, out, err


def main(argv: Sequence[str] | None = None) -> int:
    code, out, err = run(sys.argv[1:] if argv is None else list(argv))
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
