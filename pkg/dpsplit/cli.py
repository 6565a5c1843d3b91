# This code is part of dpsplit
#
# (C) Copyright dpsplit contributors 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.
"""The dpsplit command line: analyze, split and measure divided-power forms"""
from __future__ import annotations

import argparse
import json
import logging
import pathlib
import sys
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from pydantic import ValidationError

from .algebra import scalars
from .algebra.apolarity import generator_counts, hilbert_function
from .algebra.artinian import maximal_coid
from .algebra.forms import DPForm, FormParseError, format_form, parse_form
from .algebra.matrix_algebra import compute_mf, expected_mf_dimension, graded_gamma_dimensions, graded_mf
from .algebra.matrix_ideals import closure_identities
from .config import DPSPLITRC_FILE, Dpsplitrc, Settings
from .generators import build_counterexample, hdk_terms, jordan_extremal_form
from .resolutions import component_tangent_data, split_form_data, tangent_formula, tangent_space_dim
from .serialization import FormDocument, ParamFormDocument, dump_json, load_document
from .splitting.degenerate import degenerate_split_onematrix, find_nilpotent
from .splitting.obstruction import nilpotent_rank_obstruction
from .splitting.regular import regular_split, splitting_decision, splitting_upper_bound
from .version import __version__

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DOMAIN_ERROR = 1
EXIT_PARSE_ERROR = 2


@dataclass
class CommandReport:
    """What a subcommand prints: labelled lines for people, one object for --json"""

    title: str
    lines: List[Tuple[str, Any]] = field(default_factory=list)
    data: Dict[str, Any] = field(default_factory=dict)

    def add(self, label: str, value: Any, key: Optional[str] = None):
        self.lines.append((label, value))
        if key is not None:
            self.data[key] = value

    def render_text(self) -> str:
        out = [self.title]
        for label, value in self.lines:
            out.append(f"  {label} = {_text(value)}")
        return "\n".join(out) + "\n"

    def render_json(self) -> str:
        return dump_json({"command": self.title, **self.data}) + "\n"


def _text(value: Any) -> str:
    if isinstance(value, (list, tuple)):
        return "(" + ", ".join(_text(v) for v in value) + ")"
    if isinstance(value, dict):
        return ", ".join(f"{k}: {_text(v)}" for k, v in value.items())
    if isinstance(value, DPForm):
        return format_form(value)
    return str(value)


def _matrix_rows(m) -> List[List[str]]:
    return [[str(c) for c in row] for row in scalars.entries(m)]


# ---------------------------------------------------------------- input


def _read_form(args: argparse.Namespace) -> DPForm:
    if args.document is not None:
        if args.document == "-":
            document = load_document(sys.stdin.read())
        else:
            document = load_document(pathlib.Path(args.document))
        if isinstance(document, ParamFormDocument):
            raise ValueError("expected a form document, got a parameter family")
        return document.to_form()
    if args.form is None:
        raise ValueError("give a form document or --form with --vars")
    if args.vars is None:
        raise ValueError("--form needs --vars")
    domain = scalars.field_from_descriptor(args.field)
    return parse_form(args.form, args.vars, domain)


# ---------------------------------------------------------------- commands


def cmd_analyze(args: argparse.Namespace, settings: Settings) -> CommandReport:
    f = _read_form(args)
    report = CommandReport("analyze")
    report.add("form", format_form(f), "form")
    report.add("r", f.num_vars, "r")
    report.add("d", f.degree, "d")
    report.add("H", hilbert_function(f).to_list(), "hilbert")
    counts = generator_counts(f)
    report.add("beta_1j", {j: c for j, c in counts.items() if c}, "generator_counts")
    mf = compute_mf(f)
    report.add("dim M_f", mf.dimension, "mf_dimension")
    report.add("1 + beta_1d + r beta_11", expected_mf_dimension(f), "expected_mf_dimension")
    report.data["mf_basis"] = [_matrix_rows(m) for m in mf.basis]
    report.add("closed under products", mf.closed_under_mult, "closed_under_mult")
    report.add("commutative", mf.commutative, "commutative")
    if mf.closed_under_mult and mf.commutative:
        coid = maximal_coid(mf.structure_algebra(), seed=settings.seed, attempts=settings.coid_attempts)
        report.add("coid length", coid.length, "coid_length")
        report.data["coid"] = coid.to_dict()
        if coid.requires_extension:
            report.add("requires extension", True)
    if f.num_vars <= settings.graded_max_vars:
        graded = {}
        for e in range(1, min(settings.graded_max_degree, f.degree - 1) + 1):
            space = graded_mf(f, e, settings.graded_max_vars, settings.graded_max_degree)
            graded[e] = graded_gamma_dimensions(f, e, space)
        if graded:
            report.add("(dim im, dim ker) gamma_e", graded, "graded_gamma")
    if f.degree >= 1:
        closure = closure_identities(mf.basis, settings.degree_bound)
        report.add("matrix ideal identities", closure.holds, "closure_identities")
    report.add("splitting upper bound", splitting_upper_bound(f), "splitting_upper_bound")
    if f.degree >= 3:
        report.add("decision", splitting_decision(f, seed=settings.seed), "decision")
    return report


def cmd_split(args: argparse.Namespace, settings: Settings) -> CommandReport:
    f = _read_form(args)
    if args.mode == "regular":
        split = regular_split(f, seed=settings.seed, attempts=settings.coid_attempts)
        report = CommandReport("split")
        report.add("mode", "regular", "mode")
        report.add("components", split.length, "length")
        for i, component in enumerate(split.components, start=1):
            report.add(f"g_{i}", format_form(component.form))
            report.add(f"H(g_{i})", component.hilbert.to_list())
        report.data["components"] = [
            FormDocument.from_form(c.form, name=f"g_{i}").model_dump(exclude_none=True)
            for i, c in enumerate(split.components, start=1)
        ]
        report.data["report"] = split.to_dict()
        return report

    if f.degree < 3:
        raise ValueError("d < 3 for degenerate mode")
    a = find_nilpotent(f, seed=settings.seed)
    result = degenerate_split_onematrix(
        f, a, seed=settings.seed, prime=settings.prime, retry_budget=settings.retry_budget
    )
    family = ParamFormDocument.from_param_form(result.family)
    certificate = result.certificate
    report = CommandReport("split")
    report.add("mode", "degenerate", "mode")
    report.add("parameters", result.family.num_params, "params")
    report.add("f_t", _family_text(family))
    report.add("verified", certificate.verified, "verified")
    report.add("splits at point", certificate.split_length)
    report.add("flat at point", certificate.flat)
    report.data["family"] = family.model_dump(exclude_none=True)
    report.data["certificate"] = certificate.to_dict()
    report.data["nilpotent"] = _matrix_rows(a)
    return report


def _family_text(document: ParamFormDocument) -> str:
    pieces = [f"({term.coef})*x^{tuple(term.exp)}" for term in document.terms]
    return " + ".join(pieces) if pieces else "0"


def _split_components(f: DPForm, settings: Settings) -> List[DPForm]:
    return regular_split(f, seed=settings.seed, attempts=settings.coid_attempts).forms


def cmd_betti(args: argparse.Namespace, settings: Settings) -> CommandReport:
    f = _read_form(args)
    components = _split_components(f, settings)
    data = split_form_data(components)
    if "betti" not in data:
        raise ValueError("Betti tables are only joined for components with support dimension <= 2")
    report = CommandReport("betti")
    report.add("supports", data["supports"], "supports")
    for k, row in enumerate(data["betti"]["rows"]):
        report.add(f"row {k}", row)
    report.data["betti"] = data["betti"]
    report.add("beta_1j", {j: c for j, c in generator_counts(f).items() if c}, "generator_counts")
    return report


def cmd_hilbert(args: argparse.Namespace, settings: Settings) -> CommandReport:
    f = _read_form(args)
    report = CommandReport("hilbert")
    report.add("H", hilbert_function(f).to_list(), "hilbert")
    return report


def cmd_tangent(args: argparse.Namespace, settings: Settings) -> CommandReport:
    f = _read_form(args)
    report = CommandReport("tangent")
    report.add("dim (R/I^2)_d", tangent_space_dim(f), "tangent_dimension")
    components = _split_components(f, settings)
    data = [component_tangent_data(g) for g in components]
    report.add("formula", tangent_formula(data, f.num_vars, f.degree), "tangent_formula")
    report.data["components"] = [item.to_dict() for item in data]
    return report


def cmd_gen(args: argparse.Namespace, settings: Settings) -> CommandReport:
    domain = scalars.field_from_descriptor(args.field)
    report = CommandReport("gen")
    report.add("family", args.family, "family")
    if args.family == "hdk":
        if args.r is None or args.d is None:
            raise ValueError("hdk needs --r and --d")
        terms = hdk_terms(args.r, args.d, domain)
        if args.k is not None:
            f = terms.term(args.k)
        else:
            report.add("terms", [format_form(h) for h in terms.forms])
            report.data["documents"] = [
                FormDocument.from_form(h, name=f"h_{args.d},{k}").model_dump(exclude_none=True)
                for k, h in enumerate(terms.forms)
            ]
            return report
        name = f"h_{args.d},{args.k}"
    elif args.family == "jordan":
        if args.r is None or args.d is None:
            raise ValueError("jordan needs --r and --d")
        f = jordan_extremal_form(args.r, args.d, domain)
        name = f"jordan_{args.r}_{args.d}"
    else:
        if args.s is None or args.q is None or args.d is None:
            raise ValueError("counterexample needs --s, --q and --d")
        example = build_counterexample(args.s, args.q, args.d, domain=domain)
        f = example.form
        name = f"counterexample_{args.s}_{args.q}_{args.d}"
        report.data["mf_basis"] = [_matrix_rows(m) for m in example.basis]
    report.add("form", format_form(f))
    report.data["document"] = FormDocument.from_form(f, name=name).model_dump(exclude_none=True)
    return report


def cmd_obstruct(args: argparse.Namespace, settings: Settings) -> CommandReport:
    h = _read_form(args)
    r = h.num_vars if args.ambient is None else args.ambient
    verdict = nilpotent_rank_obstruction(h, r, args.target, grid_radius=settings.grid_radius, seed=settings.seed)
    report = CommandReport("obstruct")
    report.add("verdict", verdict.verdict, "verdict")
    report.add("rank bound", verdict.bound)
    report.add("nilpotent dimension", verdict.nilpotent_dimension)
    report.add("minimum rank", verdict.min_rank)
    report.add("method", verdict.method)
    report.data["obstruction"] = verdict.to_dict()
    return report


def cmd_config(args: argparse.Namespace, settings: Settings) -> CommandReport:
    report = CommandReport("config")
    rc = Dpsplitrc(_rc_path(args))
    if args.save:
        rc.save_settings(settings)
        report.add("saved", str(rc.file_path), "saved")
    for key, value in settings.to_dict().items():
        if key != "extras":
            report.add(key, value)
    report.data["settings"] = settings.to_dict()
    return report


COMMANDS: Dict[str, Callable[[argparse.Namespace, Settings], CommandReport]] = {
    "analyze": cmd_analyze,
    "split": cmd_split,
    "betti": cmd_betti,
    "hilbert": cmd_hilbert,
    "tangent": cmd_tangent,
    "gen": cmd_gen,
    "obstruct": cmd_obstruct,
    "config": cmd_config,
}


# ---------------------------------------------------------------- parser


def _common_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--json", action="store_true", help="print one JSON document")
    parser.add_argument("--seed", type=int, help="seed of every randomized choice")
    parser.add_argument("--out", type=pathlib.Path, help="write the report to this path")
    parser.add_argument("--degree-bound", type=int, help="highest degree compared in ideal identities")
    parser.add_argument("--prime", type=int, help="prime used for specialization certificates")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    parser.add_argument("--rc-file", type=pathlib.Path, help=f"settings file, defaults to {DPSPLITRC_FILE}")
    return parser


def _input_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("document", nargs="?", help="form document (JSON), '-' for stdin")
    parser.add_argument("--form", help="form text, e.g. 'x1 x2^(2) + x3^(3)'")
    parser.add_argument("--vars", type=int, help="number of variables of --form")
    parser.add_argument("--field", default="Q", help="Q or a prime")
    return parser


def build_parser() -> argparse.ArgumentParser:
    common, source = _common_parser(), _input_parser()
    parser = argparse.ArgumentParser(prog="dpsplit", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("analyze", parents=[common, source], help="Hilbert function, M_f and its coid")
    split = sub.add_parser("split", parents=[common, source], help="regular or degenerate splitting")
    split.add_argument("--mode", choices=("regular", "degenerate"), default="regular")
    sub.add_parser("betti", parents=[common, source], help="Betti table joined from a regular splitting")
    sub.add_parser("hilbert", parents=[common, source], help="Hilbert function of R/ann(f)")
    sub.add_parser("tangent", parents=[common, source], help="tangent dimension, direct and from the splitting")

    gen = sub.add_parser("gen", parents=[common], help="build hdk terms, Jordan forms or counterexamples")
    gen.add_argument("family", choices=("hdk", "jordan", "counterexample"))
    gen.add_argument("--r", type=int)
    gen.add_argument("--d", type=int)
    gen.add_argument("--k", type=int)
    gen.add_argument("--s", type=int)
    gen.add_argument("--q", type=int)
    gen.add_argument("--field", default="Q", help="Q or a prime")

    obstruct = sub.add_parser("obstruct", parents=[common, source], help="nilpotent rank obstruction")
    obstruct.add_argument("--ambient", type=int, help="ambient number of variables r, defaults to s")
    obstruct.add_argument("--target", type=int, required=True, help="target number of components m")

    config = sub.add_parser("config", parents=[common], help="show or save the effective settings")
    config.add_argument("--save", action="store_true", help="write the settings to the rc file")
    return parser


def _rc_path(args: argparse.Namespace) -> pathlib.Path:
    return args.rc_file if args.rc_file is not None else DPSPLITRC_FILE


def _settings(args: argparse.Namespace) -> Settings:
    settings = Dpsplitrc(_rc_path(args)).load_settings()
    return settings.updated(seed=args.seed, degree_bound=args.degree_bound, prime=args.prime)


def _configure_logging(verbosity: int):
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def _emit(text: str, out: Optional[pathlib.Path]):
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Runs one subcommand and returns its exit code

    0 on success, 1 on domain errors, 2 on unparsable input.
    """
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    try:
        settings = _settings(args)
        report = COMMANDS[args.command](args, settings)
    except (FormParseError, ValidationError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"dpsplit: parse error: {exc}\n")
        return EXIT_PARSE_ERROR
    except (ValueError, RuntimeError) as exc:
        sys.stderr.write(f"dpsplit: error: {exc}\n")
        return EXIT_DOMAIN_ERROR
    _emit(report.render_json() if args.json else report.render_text(), args.out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
