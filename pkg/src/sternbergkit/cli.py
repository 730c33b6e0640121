"""Command-line front end: one subcommand per pipeline stage, file in and file out"""

import argparse
import csv
import io
import json
import logging
import os
import sys
import tempfile
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Type, TypeVar

import mpmath
from pydantic import BaseModel
from pydantic import ValidationError as PydanticValidationError

from . import __version__
from .arith import format_complex, format_number, is_gaussian, is_rational, parse_real
from .exceptions import (
    ResonanceError,
    SchemaError,
    SternbergKitError,
    WeightAssumptionError,
)
from .fixtures import fixture_corpus
from .kit import SternbergKit
from .linear import LinearPart
from .multiindex import MultiIndex, indices_up_to
from .truncated import TruncatedSeries
from .types import (
    Command,
    DominationPolicy,
    EigenvalueFixture,
    FixtureKind,
    OmegaDocument,
    Property,
    ResonanceReport,
    RunConfig,
    SeriesDocument,
    WeightDocument,
)
from .weight import Weight

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_FINDING = 2
EXIT_RESONANCE = 3

Doc = TypeVar("Doc", bound=BaseModel)


# ----- Serialization -----

def jsonable(value: Any) -> Any:
    """Plain JSON data with every number as an exact or full-precision decimal string"""
    if isinstance(value, BaseModel):
        return {name: jsonable(getattr(value, name)) for name in type(value).model_fields}
    if isinstance(value, Weight):
        return jsonable(
            WeightDocument(
                generator=value.generator,
                values=[format_number(v) for v in value.values],
                horizon=value.horizon,
            )
        )
    if isinstance(value, MultiIndex):
        return value.to_list()
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return value
    if is_rational(value) or isinstance(value, mpmath.mpf):
        return format_number(value)
    if is_gaussian(value) or isinstance(value, mpmath.mpc):
        return format_complex(value)
    if isinstance(value, dict):
        return {_key(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return str(value)


def _key(key: Any) -> str:
    if isinstance(key, MultiIndex):
        return ",".join(str(e) for e in key.exponents)
    if isinstance(key, tuple):
        return ":".join(_key(part) if isinstance(part, tuple) else str(part) for part in key)
    if isinstance(key, Enum):
        return str(key.value)
    return str(key)


def write_atomic(path: Path, text: str) -> None:
    """Write through a temporary file in the same directory and rename"""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=str(path.parent), prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dump_json(data: Any) -> str:
    return json.dumps(jsonable(data), indent=2, sort_keys=True) + "\n"


def dump_csv(rows: Sequence[Sequence[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerows(rows)
    return buffer.getvalue()


# ----- Inputs -----

def load_document(path: str, model: Type[Doc]) -> Doc:
    try:
        with open(path, encoding="utf-8") as handle:
            raw = json.load(handle)
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path}: invalid JSON at line {e.lineno}: {e.msg}") from e
    try:
        return model.model_validate(raw)
    except PydanticValidationError as e:
        raise SchemaError(f"{path}: {e.error_count()} schema errors", errors=e.errors()) from e


def load_linear(path: str) -> LinearPart:
    doc = load_document(path, EigenvalueFixture)
    try:
        return LinearPart.from_values(doc.eigenvalues, doc.exact)
    except (TypeError, ValueError) as e:
        raise SchemaError(f"{path}: bad eigenvalue: {e}") from e


def load_omega(path: str, config: RunConfig, kit: SternbergKit) -> ResonanceReport:
    """An Omega table, or eigenvalues from which one is computed"""
    with open(path, encoding="utf-8") as handle:
        try:
            raw = json.load(handle)
        except json.JSONDecodeError as e:
            raise SchemaError(f"{path}: invalid JSON at line {e.lineno}: {e.msg}") from e
    if isinstance(raw, dict) and "eigenvalues" in raw:
        linear = load_linear(path)
        return kit.linearize.check_nonresonance(linear, config.max_degree or config.order)
    doc = load_document(path, OmegaDocument)
    try:
        table = {int(q): parse_real(v, doc.exact) for q, v in doc.omega_squared.items()}
        return ResonanceReport.from_omega(table, exact=doc.exact, source=doc.source)
    except (TypeError, ValueError) as e:
        raise SchemaError(f"{path}: bad Omega table: {e}") from e


def _require_inputs(config: RunConfig, count: int) -> None:
    if len(config.input_paths) != count:
        raise SchemaError(
            f"{config.command.value} needs {count} input files, got {len(config.input_paths)}"
        )


# ----- Commands -----

class Runner:
    """Executes one resolved RunConfig"""

    def __init__(self, config: RunConfig):
        self.config = config
        self.kit = SternbergKit(precision=config.precision, debug=config.debug)

    def meta(self) -> Dict[str, Any]:
        return {
            "command": self.config.command.value,
            "seed": self.config.seed,
            "precision": self.config.precision,
            "tolerance": self.kit.tolerance,
            "version": __version__,
        }

    def emit(self, payload: Dict[str, Any], name: str = "report.json") -> None:
        text = dump_json({"meta": self.meta(), **payload})
        if self.config.output_path is None:
            sys.stdout.write(text)
            return
        target = Path(self.config.output_path)
        if target.suffix != ".json":
            target = target / name
        write_atomic(target, text)

    def output_dir(self) -> Path:
        return Path(self.config.output_path or ".")

    def weight(self, path: str) -> Weight:
        return self.kit.weights.from_document(load_document(path, WeightDocument))

    def series(self, path: str) -> TruncatedSeries:
        return self.kit.series.from_document(load_document(path, SeriesDocument))

    def run(self) -> int:
        handlers: Dict[Command, Callable[[], int]] = {
            Command.CLASSIFY_WEIGHT: self.cmd_classify_weight,
            Command.REGULARIZE: self.cmd_regularize,
            Command.STAR: self.cmd_star,
            Command.LINEARIZE: self.cmd_linearize,
            Command.OMEGA: self.cmd_omega,
            Command.DOMINATE: self.cmd_dominate,
            Command.FIXTURES: self.cmd_fixtures,
            Command.COMPOSE_CHECK: self.cmd_compose_check,
            Command.FLOW_CHECK: self.cmd_flow_check,
        }
        with self.kit.scope():
            return handlers[self.config.command]()

    def cmd_classify_weight(self) -> int:
        _require_inputs(self.config, 1)
        weight = self.weight(self.config.input_paths[0])
        if self.config.horizon is not None:
            weight = weight.with_horizon(self.config.horizon)
        weights = self.kit.weights
        lam = self.config.lam
        payload: Dict[str, Any] = {"horizon": weight.horizon}
        if weight.horizon >= 8:
            reports = weights.implication_matrix(weight, lam=lam)
            payload["analytic_type"] = weights.classify_analytic_type(weight)
            payload["shift_duality"] = weights.shift_duality_check(weight, lam or 1)
        else:
            reports = []
            for prop in Property:
                try:
                    reports.append(weights.check_property(weight, prop, lam=lam))
                except SternbergKitError as e:
                    logger.info("skipping %s: %s", prop.value, e)
        payload["properties"] = reports
        if weight.horizon >= 4:
            payload["closure"] = weights.closure_report(weight)
        payload["weak_submultiplicativity"] = weights.weak_submultiplicativity_check(weight)
        failed = [r.property.value for r in reports if not r.holds_to_horizon]
        payload["failed"] = failed
        self.emit(payload)
        return EXIT_FINDING if self.config.strict and failed else EXIT_OK

    def cmd_regularize(self) -> int:
        _require_inputs(self.config, 1)
        weight = self.weight(self.config.input_paths[0])
        minorant = self.kit.weights.log_convex_minorant(weight)
        payload: Dict[str, Any] = {"weight": minorant}
        try:
            payload["characteristic"] = self.kit.weights.characteristic_coefficients(minorant)
        except WeightAssumptionError as e:
            payload["characteristic"] = {"error": str(e)}
        self.emit(payload)
        return EXIT_OK

    def cmd_star(self) -> int:
        _require_inputs(self.config, 2)
        m, w = (self.weight(p) for p in self.config.input_paths)
        self.emit({"weight": self.kit.weights.star_product(m, w)})
        return EXIT_OK

    def cmd_omega(self) -> int:
        _require_inputs(self.config, 1)
        linear = load_linear(self.config.input_paths[0])
        report = self.kit.linearize.check_nonresonance(
            linear, self.config.max_degree or self.config.order
        )
        self.emit({"resonance": report})
        return EXIT_OK if report.usable else EXIT_RESONANCE

    def _policy_delta(self) -> Optional[Fraction]:
        if self.config.delta is None:
            return None
        return parse_real(self.config.delta, exact=True)

    def cmd_dominate(self) -> int:
        _require_inputs(self.config, 1)
        omega = load_omega(self.config.input_paths[0], self.config, self.kit)
        if not omega.usable:
            self.emit({"resonance": omega})
            return EXIT_RESONANCE
        cert = self.kit.linearize.dominating_weight(omega, self.config.policy, self._policy_delta())
        self.emit({"certificate": cert})
        return EXIT_OK

    def cmd_linearize(self) -> int:
        """Nonresonance, conjugacy, ledger, bounds, domination and the regularity class"""
        _require_inputs(self.config, 3)
        eig_path, series_path, weight_path = self.config.input_paths
        linear = load_linear(eig_path)
        g_hat = self.series(series_path)
        m = self.weight(weight_path)
        n = self.config.order
        linearize = self.kit.linearize
        q = max(self.config.max_degree or n, n, 8)

        resonance = linearize.check_nonresonance(linear, q)
        if not resonance.usable:
            self.emit({"resonance": resonance, "summary": "resonant"}, "certificate.json")
            return EXIT_RESONANCE

        checks: Dict[str, str] = {}
        phi = linearize.formal_linearize(linear, g_hat, n)
        checks["conjugacy"] = "pass"
        ledger = linearize.accumulation_ledger(linear, n, resonance)
        checks["tree_products"] = "pass"
        try:
            siegel: Any = linearize.siegel_bound_check(ledger, linear, m.with_horizon(n), g_hat, n)
            checks["accumulation_bound"] = "pass"
        except WeightAssumptionError as e:
            siegel = {"error": str(e)}
            checks["accumulation_bound"] = "fail: weight is not strictly FDB"
        counting = [
            linearize.counting_lemma_check(ledger, level, k)
            for level in range(2, n + 1)
            for k in indices_up_to(linear.dim, n, start=2)
        ]
        checks["counting"] = "pass"
        separation = sum(r.separation_violations for r in counting)

        cert = linearize.dominating_weight(resonance, self.config.policy, self._policy_delta())
        checks["domination"] = "pass"
        horizon = min(n, cert.certified_up_to)
        regularity = linearize.classify_regularity(m, cert)
        borel = linearize.borel_seminorm_exponent(
            phi.truncate(horizon), m.with_horizon(n), cert.weight
        )

        table = linearize.coefficient_table(ledger, phi, m.with_horizon(n), cert.weight)
        summary = "pass" if all(v == "pass" for v in checks.values()) else "fail"
        out = self.output_dir()
        write_atomic(out / "table.csv", dump_csv(table))
        self.config.output_path = str(out)
        self.emit(
            {
                "summary": summary,
                "checks": checks,
                "omega_squared": resonance.omega_squared,
                "sigma": ledger.sigma,
                "siegel": siegel,
                "separation_violations": separation,
                "certificate": cert,
                "regularity": regularity,
                "borel": borel,
            },
            "certificate.json",
        )
        return EXIT_OK if summary == "pass" else EXIT_FINDING

    def cmd_fixtures(self) -> int:
        kind = FixtureKind(self.config.kind or FixtureKind.ALL.value)
        corpus = fixture_corpus(
            kind,
            max_degree=self.config.max_degree or 256,
            delta=self._policy_delta() or Fraction(1, 2),
            horizon=self.config.horizon,
            seed=self.config.seed,
            order=self.config.order,
        )
        out = self.output_dir()
        for name, doc in sorted(corpus.items()):
            write_atomic(out / name, dump_json(doc))
        manifest = {"meta": self.meta(), "kind": kind.value, "files": sorted(corpus)}
        write_atomic(out / "manifest.json", dump_json(manifest))
        logger.info("wrote %d fixture files to %s", len(corpus), out)
        return EXIT_OK

    def cmd_compose_check(self) -> int:
        _require_inputs(self.config, 4)
        g_path, h_path, w_path, m_path = self.config.input_paths
        g, h = self.series(g_path), self.series(h_path)
        w, m = self.weight(w_path), self.weight(m_path)
        lam = self.config.lam or "1"
        report = self.kit.series.main_lemma_check(g, h, w, m, lam, self.config.order)
        self.emit({"main_lemma": report})
        failed = not report.holds or not report.precondition.holds
        return EXIT_FINDING if self.config.strict and failed else EXIT_OK

    def cmd_flow_check(self) -> int:
        _require_inputs(self.config, 3)
        v_path, time_path, space_path = self.config.input_paths
        v = self.series(v_path)
        report = self.kit.series.flow_majorant_check(
            v, self.weight(time_path), self.weight(space_path), self.config.order
        )
        self.emit({"flow": report})
        return EXIT_FINDING if self.config.strict and not report.holds else EXIT_OK


# ----- Entry point -----

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sternbergkit",
        description="Ultradifferentiable weights and formal linearization of local maps.",
    )
    parser.add_argument("command", choices=[c.value for c in Command])
    parser.add_argument("inputs", nargs="*", help="input JSON documents")
    parser.add_argument("--out", dest="output_path", help="output file or directory")
    parser.add_argument("--horizon", type=int)
    parser.add_argument("--order", type=int, default=10)
    parser.add_argument("--Q", dest="max_degree", type=int, help="tabulation degree for Omega")
    parser.add_argument(
        "--policy",
        choices=[p.value for p in DominationPolicy],
        default=DominationPolicy.MINIMAL.value,
    )
    parser.add_argument("--delta", help="Gevrey loss, e.g. 1/2")
    parser.add_argument("--lambda", dest="lam", help="composition constant")
    parser.add_argument("--kind", choices=[k.value for k in FixtureKind])
    parser.add_argument("--precision", type=int, default=128, help="mpmath bits, at least 128")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--strict", action="store_true", help="exit 2 on predicate failures")
    parser.add_argument("--debug", action="store_true")
    return parser


def config_from_args(argv: Optional[List[str]] = None) -> RunConfig:
    args = build_parser().parse_args(argv)
    try:
        return RunConfig(
            command=args.command,
            input_paths=args.inputs,
            output_path=args.output_path,
            horizon=args.horizon,
            order=args.order,
            max_degree=args.max_degree,
            policy=args.policy,
            delta=args.delta,
            lam=args.lam,
            kind=args.kind,
            precision=args.precision,
            seed=args.seed,
            strict=args.strict,
            debug=args.debug,
        )
    except PydanticValidationError as e:
        raise SchemaError(f"invalid options: {e.error_count()} errors", errors=e.errors()) from e


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        config = config_from_args(argv)
        return Runner(config).run()
    except ResonanceError as e:
        print(f"sternbergkit: {e}", file=sys.stderr)
        return EXIT_RESONANCE
    except SternbergKitError as e:
        print(f"sternbergkit: {e}", file=sys.stderr)
        return e.exit_code if e.exit_code is not None else EXIT_INPUT
    except OSError as e:
        print(f"sternbergkit: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
