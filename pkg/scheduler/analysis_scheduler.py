"""
The analysis pipeline: decompose → radial coefficients → criteria → identity checks → cycle scan.

Each stage reports through an optional progress_cb(dict) with {"type": ..., "data": ...} events.
A stage that cannot run records why in the report notes; only an out-of-scope system aborts.
"""
import logging
from typing import Any, Callable, Dict, List, Optional, Union

from analysis.criteria import CriterionVerdict, evaluate_all
from analysis.identities import (check_abel_transport, check_alpha_consistency, check_divergence_transfer_cherkas,
                                 check_identity_12, check_identity_prop26, check_identity_19, eps_sign_check,
                                 polar_aux_sign, two_curve_certificate)
from analysis.transforms import Curve, cherkas, polar_equation, script_F
from algebra.trigpoly import sign_analysis
from coordinator.schema import AnalysisOptions, AnalysisReport, SystemSpec
from dynamics.return_map import CycleReport, find_cycles, orbit_integral_identity, plane_stability
from store.memory import ReportStore
from system.errors import QHCyclesError
from system.vectorfield import QHSystem, RadialSystem, radial_coefficients

logger = logging.getLogger(__name__)

ProgressCb = Optional[Callable[[Dict[str, Any]], None]]

# auxiliary curves for the Abel-side checks: the invariant line ρ = 1 and ρ = ε
ABEL_EPS = 0.25
TRANSPORT_R0 = 1.0


class AnalysisScheduler:
    def __init__(self, store: Optional[ReportStore] = None):
        self.mem = store if store is not None else ReportStore()

    @staticmethod
    def _push(cb, p): cb and cb(p)

    def _stage(self, cb: ProgressCb, name: str, notes: List[str], fn: Callable[[], Any]) -> Any:
        """Run one stage; library errors become a note and a None result."""
        self._push(cb, {"type": "stage_start", "data": {"stage": name}})
        logger.info("stage %s", name)
        try:
            out = fn()
            status = "succeed"
        except QHCyclesError as e:
            logger.warning("stage %s: %s", name, e)
            notes.append(f"{name}: {type(e).__name__}: {e}")
            out, status = None, "failed"
        self._push(cb, {"type": "stage_end", "data": {"stage": name, "status": status}})
        return out

    # ---------- identity checks ----------
    def _identities(self, rs: RadialSystem, opts: AnalysisOptions, cb: ProgressCb,
                    notes: List[str]) -> Dict[str, Any]:
        results: List[Dict[str, Any]] = []
        certificates: Dict[str, Any] = {}
        bm_strict = sign_analysis(rs.b_m).strict
        if bm_strict:
            results.append(check_identity_19(rs, opts.samples, opts.seed).to_dict())
            results.append(check_identity_prop26(rs, opts.samples, opts.seed).to_dict())
            certificates["polar_aux_sign"] = {k: v.to_dict() for k, v in polar_aux_sign(rs, opts.samples, opts.seed).items()}
        else:
            notes.append("identities: b_m has zeros; polar auxiliary-function checks skipped")

        ab = self._stage(cb, "cherkas", notes, lambda: cherkas(rs))
        if ab is not None:
            one, eps = Curve.constant(1.0), Curve.constant(ABEL_EPS)
            results.append(check_alpha_consistency(ab, opts.samples, opts.seed).to_dict())
            results.append(check_identity_12(ab, one, eps, opts.samples, opts.seed).to_dict())
            results.append(check_divergence_transfer_cherkas(rs, ABEL_EPS, opts.samples, opts.seed).to_dict())
            transport = self._stage(cb, "abel_transport", notes,
                                    lambda: check_abel_transport(rs, TRANSPORT_R0, opts.tol))
            if transport is not None:
                results.append(transport.to_dict())
            certificates["two_curve"] = two_curve_certificate(ab, one, eps).to_dict()
            certificates["eps_sign"] = eps_sign_check(rs, ABEL_EPS).to_dict()
        for r in results:
            if not r["passed"]:
                notes.append(f"identity {r['name']}: residual {r['residual']:.3e} above {r['tolerance']:.0e}")
        return {"identities": results, "certificates": certificates}

    # ---------- cycles ----------
    def _cycles(self, rs: RadialSystem, opts: AnalysisOptions, cb: ProgressCb,
                notes: List[str]) -> Dict[str, Any]:
        ode = polar_equation(rs)
        report: CycleReport = find_cycles(ode, opts.r_min, opts.r_max, opts.grid_points, opts.tol,
                                               progress_cb=cb, margin=opts.margin)
        try:
            aux = script_F(rs)
        except QHCyclesError:
            aux = None
        out = report.to_dict()
        for cyc, entry in zip(report.cycles, out["cycles"]):
            try:
                entry["plane_stability"] = plane_stability(cyc, rs).value
            except QHCyclesError as e:
                notes.append(f"cycle r0={cyc.r0:.10g}: {e}")
            if aux is not None:
                try:
                    entry["orbit_identity"] = orbit_integral_identity(ode, cyc, aux, opts.tol, opts.margin)
                except QHCyclesError as e:
                    notes.append(f"cycle r0={cyc.r0:.10g}: orbit identity not evaluated: {e}")
        return out

    @staticmethod
    def _cross_check(verdicts: List[CriterionVerdict], cycles: Dict[str, Any], notes: List[str]) -> None:
        found = cycles.get("cycles", [])
        for v in verdicts:
            if not v.applies:
                continue
            cap = v.conclusion.get("max_cycles")
            if cap is not None and len(found) > cap:
                notes.append(f"{v.criterion}: {len(found)} cycles found, criterion allows at most {cap}")
            want = v.conclusion.get("stability")
            if want and cap == 1 and len(found) == 1 and found[0].get("plane_stability") not in (None, want):
                notes.append(f"{v.criterion}: predicted {want}, scan found {found[0]['plane_stability']}")

    # ---------- dispatch ----------
    def dispatch(self, ctx: str, source: Union[SystemSpec, QHSystem],
                 options: Optional[AnalysisOptions] = None, *,
                 progress_cb: ProgressCb = None) -> AnalysisReport:
        """
        Analyse one system.
        :param ctx: context id the report is stored under
        :param source: input document or an already built system
        :param options: effective options; when None, defaults overlaid with the document's overrides
        :raise NotTwoComponents, InvalidWeightedDegree: system out of scope
        """
        if options is None:
            options = AnalysisOptions().merged(source.analysis if isinstance(source, SystemSpec) else None)
        cb = progress_cb
        notes: List[str] = []

        self._push(cb, {"type": "stage_start", "data": {"stage": "decompose"}})
        system = source.to_system() if isinstance(source, SystemSpec) else source
        self._push(cb, {"type": "stage_end", "data": {"stage": "decompose", "status": "succeed",
                                                      "degrees": [system.n, system.m]}})

        rs = self._stage(cb, "radial_coefficients", notes, lambda: radial_coefficients(system))
        verdicts = self._stage(cb, "criteria", notes,
                               lambda: evaluate_all(system, rs, options.quad_tol, progress_cb=cb)) or []
        checks = self._stage(cb, "identities", notes, lambda: self._identities(rs, options, cb, notes)) \
            or {"identities": [], "certificates": {}}
        cycles = self._stage(cb, "cycles", notes, lambda: self._cycles(rs, options, cb, notes)) or {}
        self._cross_check(verdicts, cycles, notes)

        report = AnalysisReport(
            context_id=ctx,
            system=SystemSpec.from_system(system).model_dump(exclude_none=True),
            decomposition={"weight": system.weight.to_list(), "degrees": [system.n, system.m], "valid": True,
                           "components": [system.low.to_dict(), system.high.to_dict()]},
            radial_coefficients=rs.to_dict(),
            criteria=[v.to_dict() for v in verdicts],
            identities=checks["identities"],
            certificates=checks["certificates"],
            cycles=cycles,
            options=options.model_dump(),
            notes=notes,
        )
        self.mem.update(ctx, {"report": report.model_dump()})
        self._push(cb, {"type": "report", "data": report.model_dump()})
        return report
