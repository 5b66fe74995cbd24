import random
import subprocess
import sys
import textwrap

import pytest

from termfilter.cli import main as cli_main
from termfilter.dp import DpProblem, dependency_pairs, scc_decompose
from termfilter.orders import lpo_af_ge, lpo_af_gt
from termfilter.prover import (Maybe, ProverConfig, Terminating, Timeout,
                               reduction_pair_processor, prove, render_proof)
from termfilter.terms import Trs
from termfilter.tpdb import parse_trs

from util import EX13_TEXT, EX2_TEXT, ex13, ex2, random_trs


CONFIGS = [(proc, mode) for proc in ("thm5", "thm12") for mode in ("strict", "quasi")]


@pytest.mark.parametrize("processor,mode", CONFIGS)
def test_division_terminates_all_configs(processor, mode):
    verdict = prove(ex2(), ProverConfig(mode=mode, processor=processor))
    assert isinstance(verdict, Terminating)
    rp_steps = [s for s in verdict.steps if s.processor == "reduction_pair"]
    assert len(rp_steps) == 2
    for step in rp_steps:
        w = step.witness
        assert w is not None and w.removed
        for p in w.removed:
            assert lpo_af_gt(w.precedence, w.filtering, mode, p.lhs, p.rhs)
        for r in w.usable:
            assert lpo_af_ge(w.precedence, w.filtering, mode, r.lhs, r.rhs)


def test_self_loop_is_maybe():
    trs = parse_trs("(VAR x)(RULES f(x) -> f(x))")
    verdict = prove(trs, ProverConfig())
    assert isinstance(verdict, Maybe)
    assert "f#" in verdict.reason


@pytest.mark.parametrize("mode", ["strict", "quasi"])
def test_div_if_terminates_thm12(mode):
    verdict = prove(ex13(), ProverConfig(mode=mode, processor="thm12"))
    assert isinstance(verdict, Terminating)


def test_div_if_witness_excludes_ge_rules():
    trs = ex13()
    hits = []
    for mode in ("strict", "quasi"):
        verdict = prove(trs, ProverConfig(mode=mode, processor="thm12"))
        assert isinstance(verdict, Terminating)
        for step in verdict.steps:
            if step.processor != "reduction_pair":
                continue
            roots = {p.root.display for p in step.problem.pairs.rules}
            if roots <= {"div#", "if#"}:
                hits.append(all(r.root.display != "ge" for r in step.witness.usable))
    assert hits and any(hits)


def test_processor_empty_problem_no_progress():
    trs = ex2()
    problem = DpProblem(Trs.of([]), trs)
    outcome = reduction_pair_processor(problem, ProverConfig())
    assert outcome.status == "empty"


def test_processor_unsat_no_progress():
    trs = parse_trs("(VAR x)(RULES f(x) -> f(x))")
    problem = scc_decompose(DpProblem(dependency_pairs(trs), trs))[0]
    outcome = reduction_pair_processor(problem, ProverConfig())
    assert outcome.status == "unsat"


def test_processor_progress_shrinks_pairs():
    trs = ex13()
    problem = DpProblem(dependency_pairs(trs), trs)
    subs = scc_decompose(problem)
    for sub in subs:
        outcome = reduction_pair_processor(sub, ProverConfig(processor="thm12"))
        assert outcome.status == "progress"
        assert len(outcome.problem.pairs.rules) < len(sub.pairs.rules)
        assert set(outcome.problem.pairs.rules) <= set(sub.pairs.rules)


def test_full_problem_processor_thm12():
    trs = ex13()
    problem = DpProblem(dependency_pairs(trs), trs)
    outcome = reduction_pair_processor(problem, ProverConfig(processor="thm12"))
    assert outcome.status == "progress"
    w = outcome.witness
    for rule in w.usable:
        assert lpo_af_ge(w.precedence, w.filtering, "strict", rule.lhs, rule.rhs)


def test_timeout_verdict():
    verdict = prove(ex13(), ProverConfig(timeout=0.0))
    assert isinstance(verdict, Timeout)


def test_prove_deterministic():
    first = prove(ex2(), ProverConfig(processor="thm12", mode="quasi"))
    second = prove(ex2(), ProverConfig(processor="thm12", mode="quasi"))
    assert render_proof(first) == render_proof(second)


def test_thm12_proves_whatever_thm5_proves():
    rng = random.Random(2024)
    proved5 = 0
    for _ in range(40):
        trs = random_trs(rng, max_symbols=3, max_rules=3)
        v5 = prove(trs, ProverConfig(processor="thm5", timeout=5))
        if isinstance(v5, Terminating):
            proved5 += 1
            v12 = prove(trs, ProverConfig(processor="thm12", timeout=5))
            assert isinstance(v12, Terminating), str(trs)
    assert proved5 > 0


def test_empty_and_trivial_systems_terminate():
    assert isinstance(prove(parse_trs("(VAR)(RULES )")), Terminating)
    assert isinstance(prove(parse_trs("(VAR x)(RULES f(x) -> x)")), Terminating)


def test_render_proof_mentions_witness():
    verdict = prove(ex2(), ProverConfig(processor="thm5"))
    text = render_proof(verdict)
    assert "TERMINATING" in text
    assert "precedence:" in text and "filtering:" in text
    assert "usable rule" in text


def test_external_solver_end_to_end(tmp_path):
    script = tmp_path / "fake_solver.py"
    script.write_text(textwrap.dedent("""
        import sys
        from termfilter.cnf import parse_dimacs
        from termfilter.solver import solve_internal
        cnf = parse_dimacs(open(sys.argv[1]).read())
        res = solve_internal(cnf)
        if res.status == "sat":
            print("s SATISFIABLE")
            lits = [v if res.model[v] else -v for v in sorted(res.model)]
            print("v " + " ".join(map(str, lits)) + " 0")
        else:
            print("s UNSATISFIABLE")
    """))
    config = ProverConfig(solver=f"external:{sys.executable} {script}")
    verdict = prove(ex2(), config)
    assert isinstance(verdict, Terminating)


# ----------------------------------------------------------------------
# command line

def test_cli_terminating(tmp_path, capsys):
    path = tmp_path / "division.trs"
    path.write_text(EX2_TEXT)
    code = cli_main([str(path)])
    assert code == 0
    assert "TERMINATING" in capsys.readouterr().out


def test_cli_maybe(tmp_path, capsys):
    path = tmp_path / "loop.trs"
    path.write_text("(VAR x)(RULES f(x) -> f(x))")
    code = cli_main([str(path)])
    assert code == 1
    assert "MAYBE" in capsys.readouterr().out


def test_cli_timeout(tmp_path, capsys):
    path = tmp_path / "divif.trs"
    path.write_text(EX13_TEXT)
    assert cli_main([str(path), "--timeout", "0.0"]) == 2
    assert "TIMEOUT" in capsys.readouterr().out


def test_cli_parse_error(tmp_path, capsys):
    path = tmp_path / "bad.trs"
    path.write_text("(VAR x)(RULES x -> x)")
    assert cli_main([str(path)]) == 3
    assert "error" in capsys.readouterr().err


def test_cli_missing_file(capsys):
    assert cli_main(["/no/such/file.trs"]) == 3
    assert "error" in capsys.readouterr().err


def test_cli_proof_and_options(tmp_path, capsys):
    path = tmp_path / "division.trs"
    path.write_text(EX2_TEXT)
    code = cli_main([str(path), "--order", "qlpo", "--processor", "thm5", "--proof"])
    assert code == 0
    out = capsys.readouterr().out
    assert "reduction pair (thm5, qlpo)" in out


def test_cli_emit_dimacs_and_dump(tmp_path, capsys):
    path = tmp_path / "division.trs"
    path.write_text(EX2_TEXT)
    outdir = tmp_path / "cnf"
    code = cli_main([str(path), "--emit-dimacs", str(outdir), "--dump-formula"])
    assert code == 0
    cnfs = sorted(p.name for p in outdir.glob("*.cnf"))
    manifests = sorted(p.name for p in outdir.glob("*.vars.json"))
    assert cnfs == ["problem001.cnf", "problem002.cnf"]
    assert manifests == ["problem001.vars.json", "problem002.vars.json"]
    import json
    manifest = json.loads((outdir / "problem001.vars.json").read_text())
    assert "variables" in manifest and manifest["pairs"]
    out = capsys.readouterr().out
    assert "(atom" in out  # formula dump made it to stdout


def test_cli_bad_solver_value(tmp_path, capsys):
    path = tmp_path / "division.trs"
    path.write_text(EX2_TEXT)
    assert cli_main([str(path), "--solver", "quantum"]) == 3


def test_console_entry_point(tmp_path):
    path = tmp_path / "division.trs"
    path.write_text(EX2_TEXT)
    proc = subprocess.run([sys.executable, "-m", "termfilter.cli", str(path)],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "TERMINATING" in proc.stdout


ACKERMANN = """
(VAR x y)
(RULES
  ack(0,y) -> s(y)
  ack(s(x),0) -> ack(x,s(0))
  ack(s(x),s(y)) -> ack(x,ack(s(x),y))
)
"""


@pytest.mark.parametrize("processor,mode", CONFIGS)
def test_ackermann_terminates(processor, mode):
    # one three-pair component; exercises nested defined calls and
    # multi-pair strictness bookkeeping
    trs = parse_trs(ACKERMANN)
    verdict = prove(trs, ProverConfig(mode=mode, processor=processor, timeout=30))
    assert isinstance(verdict, Terminating)


def test_symbolic_identifiers():
    trs = parse_trs("(VAR x y)(RULES +(+(x,y),y) -> +(x,s(y)))")
    assert isinstance(prove(trs, ProverConfig()), Terminating)


def test_self_embedding_system_is_maybe():
    trs = parse_trs("(VAR x)(RULES f(x) -> f(f(x)))")
    verdict = prove(trs, ProverConfig())
    assert isinstance(verdict, Maybe)


def test_duplicate_rules_tolerated():
    trs = parse_trs("(VAR x y)(RULES minus(s(x),s(y)) -> minus(x,y) "
                    "minus(s(x),s(y)) -> minus(x,y))")
    assert isinstance(prove(trs, ProverConfig()), Terminating)


REVERSE = """
(VAR x l k)
(RULES
  app(nil,k) -> k
  app(cons(x,l),k) -> cons(x,app(l,k))
  rev(nil) -> nil
  rev(cons(x,l)) -> app(rev(l),cons(x,nil))
)
"""


@pytest.mark.parametrize("processor,mode", CONFIGS)
def test_list_reverse_terminates(processor, mode):
    trs = parse_trs(REVERSE)
    verdict = prove(trs, ProverConfig(mode=mode, processor=processor, timeout=30))
    assert isinstance(verdict, Terminating)


def test_size_preserving_recursion_is_maybe():
    # shuffle recurses through rev, which no path order with filterings can
    # measure as decreasing; the honest answer is "no proof found"
    trs = parse_trs(REVERSE + "\n(VAR x l)\n(RULES shuffle(nil) -> nil "
                    "shuffle(cons(x,l)) -> cons(x,shuffle(rev(l))))")
    verdict = prove(trs, ProverConfig(processor="thm12", mode="quasi", timeout=30))
    assert isinstance(verdict, Maybe)
    assert "shuffle#" in verdict.reason
