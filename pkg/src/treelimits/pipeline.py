"""Run the symbolic, tree and numeric engines on a curve spec and cross-check them."""
from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

from .curve import CurveSpec, End, SpecError, load_curve_spec
from .h3 import BASEPOINT, HyperbolicContext, approximate_center, center_oracle
from .limits import (DriftError, RescalingSchedule, basepoint_drift_check, blows_up,
                     conversion_factor, irreducibility_probe, limit_length, limit_metric,
                     numeric_generators, numeric_length_samples, orbit_limit_length, parameter_at)
from .newton import asymptotic_exponents, match_exponents, newton_polygon, parse_bivariate
from .trees import (LimitMetric, NonAdditiveError, NotRealizableError, TreeError,
                    branch_distances_integral, four_point_witness, half_integer_branch_check,
                    reconstruct_tree)
from .words import enumerate_ball

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NO_BLOWUP = 2
EXIT_DISAGREE = 3
EXIT_NON_ADDITIVE = 4

NO_BLOWUP_MESSAGE = "no blow-up at this end; limits are bounded"

DEFAULT_CONFIG = {
    "ts": [1e3, 1e4, 1e5, 1e6],
    "radius": 3,
    "pmax": 4,
    "samples_per_segment": 256,
    "center_tolerance": 1e-9,
    "drift_fraction": 0.25,
    "projective_slack": 1e-12,
    "oracle_points": 10_000,
    "newton_modulus": 1e4,
    "newton_relative_tolerance": 0.02,
}

CONFIG_ENV = "TREELIMITS_CONFIG"


def load_config(path=None) -> dict:
    """Defaults overridden by the JSON file at ``path`` or $TREELIMITS_CONFIG."""
    cfg = dict(DEFAULT_CONFIG)
    path = path or os.environ.get(CONFIG_ENV)
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                override = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise SpecError(f"cannot read config {path}: {exc}") from None
        unknown = set(override) - set(cfg)
        if unknown:
            raise SpecError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(override)
    return cfg


def _context(cfg) -> HyperbolicContext:
    return HyperbolicContext(samples_per_segment=cfg["samples_per_segment"],
                             tolerance=cfg["center_tolerance"])


def atomic_write(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


# --- projective comparison --------------------------------------------------------

@dataclass
class ProjectiveLengthComparison:
    ball: list
    normalized: tuple  # (first vector, second vector)
    distance: float


def _normalize(v):
    for x in v:
        if x != 0:
            return [float(y) / float(x) for y in v]
    raise ValueError("zero length function has no projective class")


def projective_compare(numeric, symbolic, ball) -> ProjectiveLengthComparison:
    """Sup distance after dividing each vector by its shortlex-first nonzero entry."""
    words = list(ball)
    if not (len(numeric) == len(symbolic) == len(words)):
        raise ValueError("vectors must be indexed by the ball")
    u, v = _normalize(numeric), _normalize(symbolic)
    dist = max(abs(a - b) for a, b in zip(u, v))
    return ProjectiveLengthComparison(words, (u, v), dist)


# --- limit report -----------------------------------------------------------------

@dataclass
class Report:
    data: dict = field(default_factory=dict)
    text: str = ""
    tree_text: str | None = None
    exit_code: int = EXIT_OK
    failed: list = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(self.data, indent=2) + "\n"


def _select_end(spec: CurveSpec, end) -> End:
    if end is None:
        return spec.ends[0]
    if not isinstance(end, End):
        end = End.parse(end)
    if end not in spec.ends:
        raise SpecError(f"end {end.label()} is not listed in the spec")
    return end


def _render_table(rows, ts) -> str:
    header = ["word", "symbolic", "orbit"] + [f"t={t:g}" for t in ts]
    body = [[r["word"], str(r["symbolic"]), str(r["orbit"])]
            + [f"{x:.4f}" for _, x in r["numeric"]] for r in rows]
    widths = [max(len(row[k]) for row in [header] + body) for k in range(len(header))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in [header] + body]
    return "\n".join(lines) + "\n"


def build_limit_report(spec: CurveSpec, end=None, radius=None, ts=None, cfg=None) -> Report:
    cfg = dict(cfg or load_config())
    end = _select_end(spec, end)
    radius = cfg["radius"] if radius is None else radius
    ts = list(cfg["ts"] if ts is None else ts)
    cfg.update(radius=radius, ts=ts)
    curve, al = spec.curve, spec.curve.alphabet
    ctx = _context(cfg)
    render = lambda w: w.render(al) or "1"  # noqa: E731

    data = {"spec": spec.text, "config": cfg, "end": end.to_json(), "radius": radius, "ts": ts}
    report = Report(data)
    checks = data["checks"] = {}

    def fail(name, code):
        checks[name] = "fail"
        report.failed.append(name)
        if report.exit_code == EXIT_OK:
            report.exit_code = code

    ok, witness = blows_up(curve, end, max(radius, 1))
    data["blow_up_witness"] = render(witness) if ok else None
    if not ok:
        data["message"] = NO_BLOWUP_MESSAGE
        report.exit_code = EXIT_NO_BLOWUP
        report.text = NO_BLOWUP_MESSAGE + "\n"
        data["exit_code"] = report.exit_code
        return report

    ball = enumerate_ball(al, radius)
    words = list(ball)

    # symbolic and orbit columns
    rows = []
    agree = True
    for w in words:
        sym = limit_length(curve, end, w)
        try:
            orb = orbit_limit_length(curve, end, w)
        except NotRealizableError:
            orb = None
        agree &= orb == sym
        rows.append({"word": render(w), "symbolic": sym, "orbit": orb})
    checks["symbolic_equals_orbit"] = "pass" if agree else "fail"
    if not agree:
        fail("symbolic_equals_orbit", EXIT_DISAGREE)

    # numeric column and projective convergence
    numeric = {}
    for w, row in zip(words, rows):
        numeric[w] = numeric_length_samples(curve, w, ts, end)
        row["numeric"] = [[t, v] for t, v in numeric[w]]
    symbolic_vec = [r["symbolic"] for r in rows]
    proj = []
    for k, t in enumerate(ts):
        cmp = projective_compare([numeric[w][k][1] for w in words], symbolic_vec, words)
        proj.append([t, cmp.distance])
    data["projective_distance"] = proj
    data["max_numeric_error"] = [
        [t, max(abs(numeric[w][k][1] - r["symbolic"]) for w, r in zip(words, rows))]
        for k, t in enumerate(ts)]
    # Non-increasing up to float noise; exact numerics give a constant 0.
    slack = cfg["projective_slack"]
    decreasing = all(b[1] <= a[1] + slack for a, b in zip(proj, proj[1:]))
    checks["numeric_projective_decreasing"] = "pass" if decreasing else "fail"
    if not decreasing:
        fail("numeric_projective_decreasing", EXIT_DISAGREE)
    data["length_table"] = rows
    data["conversion_factor"] = conversion_factor(curve, end)
    data["rescaling"] = {"mode": RescalingSchedule().mode,
                         "displacement_factor_at_last_t": RescalingSchedule("displacement").factor(curve, ts[-1], end)}

    probe = irreducibility_probe(curve, end, radius, cfg["pmax"])
    data["irreducibility"] = {
        "verdict": probe.verdict,
        "witness": [render(x) for x in probe.witness] if probe.witness else None,
        "commutator_lengths": {str(p): v for p, v in probe.commutator_lengths.items()},
        "search": probe.search,
    }

    # limit metric and tree
    try:
        drift = basepoint_drift_check(curve, end, ctx, fraction=cfg["drift_fraction"])
        data["basepoint_drift"] = [[s, d] for s, d in drift]
        checks["basepoint_drift"] = "pass"
    except DriftError as exc:
        data["basepoint_drift"] = str(exc)
        fail("basepoint_drift", EXIT_DISAGREE)
        drift = None
    if drift is not None:
        metric = limit_metric(curve, end, ball, guard=False)
        defect, quad = four_point_witness(metric)
        data["four_point_defect"] = str(defect)
        if defect > 0:
            data["four_point_witness"] = [render(w) for w in quad]
            fail("four_point", EXIT_NON_ADDITIVE)
        else:
            checks["four_point"] = "pass"
            try:
                tree, placement = reconstruct_tree(metric)
            except TreeError as exc:
                data["reconstruction_error"] = str(exc)
                fail("reconstruction_exact", EXIT_DISAGREE)
            else:
                checks["reconstruction_exact"] = "pass"
                report.tree_text = tree.to_edge_list()
                data["tree"] = report.tree_text
                data["placement"] = {render(w): str(p.u) for w, p in placement.items()}
                marked = sorted({p.u for p in placement.values()}, key=repr)
                ok_half, worst = half_integer_branch_check(tree, marked)
                data["half_integer_check"] = {
                    "ok": ok_half,
                    "witness": None if worst is None else [str(worst[0]), str(worst[1]), str(worst[2])],
                    "integral": branch_distances_integral(tree, marked),
                }
                if probe.witness is None:
                    data["simplicial_claim"] = "unverified (no irreducibility witness)"
                elif ok_half:
                    data["simplicial_claim"] = "verified"
                    checks["half_integer"] = "pass"
                else:
                    data["simplicial_claim"] = "violated"
                    fail("half_integer", EXIT_DISAGREE)

    data["tolerances"] = {"center_tolerance": cfg["center_tolerance"],
                          "drift_fraction": cfg["drift_fraction"],
                          "projective_slack": cfg["projective_slack"]}
    data["exit_code"] = report.exit_code
    report.text = _render_text(report, rows, ts)
    return report


def _render_text(report: Report, rows, ts) -> str:
    d = report.data
    out = [f"end: {d['end']}  radius: {d['radius']}", _render_table(rows, ts)]
    out.append(f"blow-up witness: {d['blow_up_witness']}")
    irr = d["irreducibility"]
    out.append(f"irreducibility: {irr['verdict']}"
               + (f" (u={irr['witness'][0]}, w={irr['witness'][1]})" if irr["witness"] else ""))
    out.append(f"conversion factor: {d['conversion_factor']}")
    if "four_point_defect" in d:
        out.append(f"four-point defect: {d['four_point_defect']}")
    if "half_integer_check" in d:
        out.append(f"half-integer check: {d['half_integer_check']['ok']}; "
                   f"simplicial claim: {d['simplicial_claim']}")
    out.append("projective distance: " + ", ".join(f"t={t:g}: {x:.4f}" for t, x in d["projective_distance"]))
    for name, status in d["checks"].items():
        out.append(f"check {name}: {status}")
    out.append(f"exit code: {report.exit_code}")
    return "\n".join(out) + "\n"


def write_report(report: Report, out_path) -> None:
    out_path = Path(out_path)
    atomic_write(out_path, report.to_json())
    atomic_write(out_path.with_suffix(".txt"), report.text)
    if report.tree_text is not None:
        atomic_write(out_path.with_suffix(".tree"), report.tree_text)


def run_limit_report(spec_path, end=None, radius=None, ts=None, out_path=None, cfg=None) -> Report:
    spec = load_curve_spec(spec_path)
    report = build_limit_report(spec, end, radius, ts, cfg)
    if out_path is not None:
        write_report(report, out_path)
    return report


# --- tree check -------------------------------------------------------------------

@dataclass
class TreeCheck:
    defect: object
    witness: tuple | None
    tree_text: str | None
    half_integer: bool | None
    exit_code: int


def check_metric(metric: LimitMetric, render=str) -> TreeCheck:
    defect, quad = four_point_witness(metric)
    if defect > 0:
        return TreeCheck(defect, tuple(render(x) for x in quad), None, None, EXIT_NON_ADDITIVE)
    try:
        tree, placement = reconstruct_tree(metric)
    except NonAdditiveError as exc:
        return TreeCheck(exc.defect, exc.witness, None, None, EXIT_NON_ADDITIVE)
    marked = sorted({p.u for p in placement.values()}, key=repr)
    ok, _ = half_integer_branch_check(tree, marked)
    return TreeCheck(defect, None, tree.to_edge_list(), ok, EXIT_OK)


def run_tree_check(spec_path, end=None, radius=None, cfg=None, metric_file=None) -> TreeCheck:
    cfg = cfg or load_config()
    if metric_file is not None:
        with open(metric_file, encoding="utf-8") as fh:
            return check_metric(LimitMetric.from_text(fh.read()))
    spec = load_curve_spec(spec_path)
    end = _select_end(spec, end)
    radius = cfg["radius"] if radius is None else radius
    curve = spec.curve
    ok, _ = blows_up(curve, end, max(radius, 1))
    if not ok:
        return TreeCheck(None, None, None, None, EXIT_NO_BLOWUP)
    basepoint_drift_check(curve, end, _context(cfg), fraction=cfg["drift_fraction"])
    metric = limit_metric(curve, end, enumerate_ball(curve.alphabet, radius), guard=False)
    return check_metric(metric, render=lambda w: w.render(curve.alphabet) or "1")


# --- center -----------------------------------------------------------------------

@dataclass
class CenterReport:
    center: object
    r: float
    oracle_point: object
    oracle_r: float
    gap: float

    def to_text(self) -> str:
        c, o = self.center, self.oracle_point
        return (f"center: z={c.z.real:.6g}{c.z.imag:+.6g}i h={c.h:.6g}\n"
                f"r_S(center): {self.r:.6f}\n"
                f"oracle best: {self.oracle_r:.6f} at z={o.z.real:.6g}{o.z.imag:+.6g}i h={o.h:.6g}\n"
                f"gap: {self.gap:.6f} ({'ok' if self.gap <= 1 else 'exceeds 1'})\n")


def center_report(mats, cfg=None) -> CenterReport:
    cfg = cfg or load_config()
    mats = list(mats)
    x, r = approximate_center(mats, _context(cfg), BASEPOINT)
    # The oracle grid is placed around the returned center, where the competition is.
    y, r_y = center_oracle(mats, n_points=cfg["oracle_points"], x0=x)
    return CenterReport(x, r, y, r_y, r - r_y)


def run_center(spec_path, t: float, cfg=None) -> CenterReport:
    if not t > 1:
        raise SpecError("t must exceed 1")
    spec = load_curve_spec(spec_path)
    gens = numeric_generators(spec.curve, parameter_at(End.infinity(), t))
    return center_report([gens[k] for k in range(1, len(spec.curve.alphabet) + 1)], cfg)


# --- newton -----------------------------------------------------------------------

def run_newton(text: str, numeric: bool = False, cfg=None) -> dict:
    cfg = cfg or load_config()
    p = parse_bivariate(text)
    poly = newton_polygon(p)
    out = {
        "polynomial": str(p),
        "support": [list(s) for s in sorted(poly.support)],
        "hull": [list(v) for v in poly.hull],
        "edges": [{"start": list(e.start), "end": list(e.end), "normal": list(e.normal),
                   "r": e.data.r, "s": e.data.s, "a": e.data.a, "b": e.data.b,
                   "exponent": None if e.data.exponent is None else str(e.data.exponent)}
                  for e in poly.edges],
        "exponents": [str(x) for x, _ in asymptotic_exponents(p)],
    }
    if numeric:
        matched = match_exponents(p, cfg["newton_modulus"],
                                  cfg["newton_relative_tolerance"], relative=True)
        out["numeric"] = {str(k): {"ratio": r, "within_tolerance": ok}
                          for k, (r, ok) in matched.items()}
    return out


def newton_text(rep: dict) -> str:
    lines = [f"polynomial: {rep['polynomial']}",
             "support: " + " ".join(f"({m},{n})" for m, n in rep["support"]),
             "hull: " + " ".join(f"({m},{n})" for m, n in rep["hull"])]
    for e in rep["edges"]:
        lines.append(f"edge {tuple(e['start'])}->{tuple(e['end'])} normal {tuple(e['normal'])} "
                     f"exponent {e['exponent']}")
    lines.append("exponents: " + ", ".join(rep["exponents"]))
    if "numeric" in rep:
        lines.append(f"numeric: {rep['numeric']}")
    return "\n".join(lines) + "\n"


# --- compare ----------------------------------------------------------------------

def run_compare(spec_path, t: float, radius=None, end=None, cfg=None) -> ProjectiveLengthComparison:
    cfg = cfg or load_config()
    spec = load_curve_spec(spec_path)
    end = _select_end(spec, end)
    radius = cfg["radius"] if radius is None else radius
    ball = enumerate_ball(spec.curve.alphabet, radius)
    sym = [limit_length(spec.curve, end, w) for w in ball]
    num = [numeric_length_samples(spec.curve, w, [t], end)[0][1] for w in ball]
    return projective_compare(num, sym, ball)

