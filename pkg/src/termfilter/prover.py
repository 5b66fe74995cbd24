"""The proof-search driver.

``prove`` starts from the initial pair problem of a system, splits it along
strongly connected components of the estimated dependency graph, and removes
strictly decreasing pairs found by one SAT call per sub-problem, iterating to
a fixpoint.  Every satisfying assignment is replayed through the direct order
semantics before it is trusted; a verdict is never based on the SAT path
alone.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from pathlib import Path

from .cnf import tseitin_cnf, write_dimacs
from .dp import DpProblem, dependency_pairs, scc_decompose
from .encoder import encode_rp_formula
from .formula import FormulaBuilder, dump
from .lowering import DecodedModel, VarMap, decode_model, lower_atoms
from .orders import ArgumentFiltering, Collapse, Precedence, lpo_af_ge, lpo_af_gt
from .solver import UNKNOWN, UNSAT, solve
from .terms import Rule, Symbol, Trs, symbol_key
from .tpdb import parse_trs
from .usable import usable_rules_mod_pi
from . import atoms as A


class VerificationError(RuntimeError):
    """A model came back from the solver that the order semantics rejects."""


@dataclass
class ProverConfig:
    mode: str = "strict"            # strict | quasi
    processor: str = "thm12"        # thm5 | thm12
    solver: str = "internal"        # internal | external:<command>
    timeout: float | None = None
    emit_dimacs: str | None = None
    dump_formula: bool = False
    verify: bool = True
    simplify: bool = True
    share: bool = True
    propagate: bool = True


@dataclass(frozen=True)
class ReductionWitness:
    mode: str
    processor: str
    precedence: Precedence
    filtering: ArgumentFiltering
    removed: tuple[Rule, ...]
    usable: tuple[Rule, ...]
    usable_symbols: tuple[Symbol, ...]


@dataclass(frozen=True)
class ProofStep:
    processor: str                  # "dependency_graph" | "reduction_pair"
    problem: DpProblem
    results: tuple[DpProblem, ...]
    witness: ReductionWitness | None = None


@dataclass(frozen=True)
class Terminating:
    steps: tuple[ProofStep, ...]


@dataclass(frozen=True)
class Maybe:
    reason: str
    steps: tuple[ProofStep, ...] = ()


@dataclass(frozen=True)
class Timeout:
    steps: tuple[ProofStep, ...] = ()


Verdict = Terminating | Maybe | Timeout


@dataclass
class RpOutcome:
    status: str                     # progress | unsat | timeout | empty
    problem: DpProblem | None = None
    witness: ReductionWitness | None = None


@dataclass
class _Session:
    config: ProverConfig
    deadline: float | None = None
    calls: int = 0

    def out_of_time(self) -> bool:
        return self.deadline is not None and time.monotonic() > self.deadline


def _problem_signature(problem: DpProblem) -> tuple[Symbol, ...]:
    sig = set(problem.pairs.signature) | set(problem.rules.signature)
    return tuple(sorted(sig, key=symbol_key))


def reduction_pair_processor(problem: DpProblem, config: ProverConfig,
                             session: _Session | None = None) -> RpOutcome:
    """One SAT round: encode, solve, decode, verify, and drop the strictly
    decreasing pairs.  ``unsat`` and ``timeout`` outcomes leave the problem
    untouched."""
    session = session or _Session(config,
                                  None if config.timeout is None
                                  else time.monotonic() + config.timeout)
    if not problem.pairs.rules:
        return RpOutcome("empty")

    enc = encode_rp_formula(problem, processor=config.processor, mode=config.mode,
                            simplify=config.simplify, share=config.share,
                            propagate=config.propagate)
    vm = VarMap(_problem_signature(problem), len(problem.pairs.rules), enc.usable_symbols)
    builder = None
    if not (config.simplify and config.share):
        builder = FormulaBuilder(simplify=config.simplify, share=config.share)
    lowered, structural, lbuilder = lower_atoms(enc.formula, vm, config.mode,
                                                builder=builder)
    full = lbuilder.and_([lowered] + structural)
    ts = tseitin_cnf(full, vm.num_reserved)

    session.calls += 1
    if config.dump_formula:
        print(f"; formula for solver call {session.calls}")
        print(dump(enc.formula, A.describe))
    if config.emit_dimacs:
        _emit(ts.cnf, vm, ts.definitions, enc, session)

    result = solve(ts.cnf, config.solver, deadline=session.deadline)
    if result.status == UNKNOWN:
        return RpOutcome("timeout")
    if result.status == UNSAT:
        return RpOutcome("unsat")

    decoded = decode_model(result.model, vm)
    witness = _verify(problem, config, decoded, enc.usable)
    strict = set(decoded.strict_pairs)
    keep = [p for i, p in enumerate(problem.pairs.rules) if i not in strict]
    return RpOutcome("progress", DpProblem(Trs.of(keep), problem.rules), witness)


def _verify(problem: DpProblem, config: ProverConfig, decoded: DecodedModel,
            classical_usable: tuple[Rule, ...]) -> ReductionWitness:
    prec, pi = decoded.precedence, decoded.filtering
    mode = config.mode
    if config.processor == "thm5":
        obligations = classical_usable
    else:
        obligations = usable_rules_mod_pi(problem.pairs, problem.rules, pi)
    witness = ReductionWitness(
        mode, config.processor, prec, pi,
        tuple(problem.pairs.rules[i] for i in decoded.strict_pairs),
        obligations, decoded.usable_symbols)
    if not config.verify:
        return witness
    if not decoded.strict_pairs:
        raise VerificationError("model removes no pair")
    strict = set(decoded.strict_pairs)
    for i, p in enumerate(problem.pairs.rules):
        if not lpo_af_ge(prec, pi, mode, p.lhs, p.rhs):
            raise VerificationError(f"pair not weakly decreasing: {p}")
        if i in strict and not lpo_af_gt(prec, pi, mode, p.lhs, p.rhs):
            raise VerificationError(f"pair marked strict but not strictly decreasing: {p}")
    for rule in obligations:
        if not lpo_af_ge(prec, pi, mode, rule.lhs, rule.rhs):
            raise VerificationError(f"usable rule not weakly decreasing: {rule}")
    return witness


def _emit(cnf, vm: VarMap, definitions: dict[int, str], enc, session: _Session) -> None:
    directory = Path(session.config.emit_dimacs)
    directory.mkdir(parents=True, exist_ok=True)
    stem = f"problem{session.calls:03d}"
    (directory / f"{stem}.cnf").write_text(write_dimacs(cnf))
    manifest = {
        "processor": enc.processor,
        "pairs": [str(p) for p in enc.problem.pairs.rules],
        "variables": {str(v): desc for v, desc in sorted(vm.descriptions.items())},
        "definitions": {str(v): desc for v, desc in sorted(definitions.items())},
    }
    (directory / f"{stem}.vars.json").write_text(json.dumps(manifest, indent=2))


def prove(trs: Trs, config: ProverConfig | None = None) -> Verdict:
    """Full proof search; Terminating only when every leaf problem has no
    pairs left."""
    config = config or ProverConfig()
    session = _Session(config, None if config.timeout is None
                       else time.monotonic() + config.timeout)
    steps: list[ProofStep] = []
    queue: list[DpProblem] = [DpProblem(dependency_pairs(trs), trs)]
    while queue:
        if session.out_of_time():
            return Timeout(tuple(steps))
        problem = queue.pop(0)
        if not problem.pairs.rules:
            continue
        subs = scc_decompose(problem)
        steps.append(ProofStep("dependency_graph", problem, tuple(subs)))
        for sub in subs:
            if session.out_of_time():
                return Timeout(tuple(steps))
            outcome = reduction_pair_processor(sub, config, session)
            if outcome.status == "timeout":
                return Timeout(tuple(steps))
            if outcome.status != "progress":
                reason = (f"no ordering orients the {len(sub.pairs.rules)}-pair "
                          f"component rooted at "
                          f"{', '.join(sorted({p.root.display for p in sub.pairs.rules}))}")
                return Maybe(reason, tuple(steps))
            steps.append(ProofStep("reduction_pair", sub, (outcome.problem,),
                                   outcome.witness))
            queue.append(outcome.problem)
    return Terminating(tuple(steps))


def prove_file(path: str, config: ProverConfig | None = None) -> Verdict:
    return prove(parse_trs(Path(path).read_text()), config)


def _format_precedence(prec: Precedence, symbols: tuple[Symbol, ...]) -> str:
    groups: dict[int, list[str]] = {}
    for f in symbols:
        groups.setdefault(prec.rank(f), []).append(f.display)
    chains = []
    for rank in sorted(groups, reverse=True):
        chains.append(" ~ ".join(sorted(groups[rank])))
    return " > ".join(chains)


def _format_filtering(pi: ArgumentFiltering, symbols: tuple[Symbol, ...]) -> str:
    parts = []
    for f in symbols:
        spec = pi.get(f)
        if isinstance(spec, Collapse):
            parts.append(f"pi({f.display}) = {spec.position}")
        else:
            parts.append(f"pi({f.display}) = [{','.join(map(str, spec.positions))}]")
    return "; ".join(parts)


def render_proof(verdict: Verdict) -> str:
    lines: list[str] = []
    for step in verdict.steps:
        if step.processor == "dependency_graph":
            kept = sum(len(r.pairs.rules) for r in step.results)
            total = len(step.problem.pairs.rules)
            lines.append(f"dependency graph: {total} pairs -> "
                         f"{len(step.results)} component(s), {total - kept} pair(s) dropped")
            for i, sub in enumerate(step.results, 1):
                for p in sub.pairs.rules:
                    lines.append(f"  component {i}: {p}")
        else:
            w = step.witness
            assert w is not None
            symbols = _problem_signature(step.problem)
            lines.append(f"reduction pair ({w.processor}, "
                         f"{'qlpo' if w.mode == 'quasi' else 'lpo'}): removed "
                         f"{len(w.removed)} of {len(step.problem.pairs.rules)} pair(s)")
            lines.append(f"  precedence: {_format_precedence(w.precedence, symbols)}")
            lines.append(f"  filtering:  {_format_filtering(w.filtering, symbols)}")
            for p in w.removed:
                lines.append(f"  removed: {p}")
            if w.usable:
                for r in w.usable:
                    lines.append(f"  usable rule: {r}")
            else:
                lines.append("  usable rules: none")
    if isinstance(verdict, Terminating):
        lines.append("TERMINATING")
    elif isinstance(verdict, Maybe):
        lines.append(f"MAYBE ({verdict.reason})")
    else:
        lines.append("TIMEOUT")
    return "\n".join(lines)
