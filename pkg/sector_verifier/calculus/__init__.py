from sector_verifier.calculus.constructions import braiding_term, fusion_term
from sector_verifier.calculus.corpus import ScriptBuilder, identity_corpus
from sector_verifier.calculus.membership import ill_formed, membership, region_of, wf_facts
from sector_verifier.calculus.netspec import (
    AlgSym,
    Fact,
    NetSpec,
    Override,
    SectorSym,
    UnitarySym,
    disjoint,
    leq,
    load_net,
    save_net,
)
from sector_verifier.calculus.prover import check_equal, normalize
from sector_verifier.calculus.rules import Rewrite, Rule, apply_rule, rewrite_rules
from sector_verifier.calculus.scripts import (
    Script,
    ScriptStep,
    Verdict,
    format_script,
    load_scripts,
    mutate,
    parse_script,
    run_script,
    save_scripts,
)
from sector_verifier.calculus.terms import App, Gen, RegionRef, Star, Term, Uni, format_term, parse_term

__all__ = [
    "AlgSym",
    "App",
    "Fact",
    "Gen",
    "NetSpec",
    "Override",
    "RegionRef",
    "Rewrite",
    "Rule",
    "Script",
    "ScriptBuilder",
    "ScriptStep",
    "SectorSym",
    "Star",
    "Term",
    "Uni",
    "UnitarySym",
    "Verdict",
    "apply_rule",
    "braiding_term",
    "check_equal",
    "disjoint",
    "format_script",
    "format_term",
    "fusion_term",
    "identity_corpus",
    "ill_formed",
    "leq",
    "load_net",
    "load_scripts",
    "membership",
    "mutate",
    "normalize",
    "parse_script",
    "parse_term",
    "region_of",
    "rewrite_rules",
    "run_script",
    "save_net",
    "save_scripts",
    "wf_facts",
]
