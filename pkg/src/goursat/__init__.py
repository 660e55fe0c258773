"""Finite universal-algebra workbench.

Congruence lattices of finite algebras, closure operators induced by
equational subcategories, permutability levels and term-condition
searches, and congruence-distributivity checks, all verified exactly on
concrete operation tables.
"""

from .algebras import (
    FiniteAlgebra,
    QuotientMap,
    generate_subuniverse,
    kernel_pair,
    load_algebra,
    product,
    quotient,
    save_algebra,
)
from .closure import (
    AxiomReport,
    Bounds,
    ClosureResult,
    SubvarietySpec,
    birkhoff_congruence,
    check_axioms,
    closure_by_component,
    closure_effective,
    closure_goursat,
    reflect,
    roundtrip_check,
)
from .corpus import CorpusEntry, builtin, corpus_specs, default_entries
from .distributivity import (
    DistReport,
    check_axiom7,
    closure_meet_identity_check,
    dist_report,
    image_meet_check,
    is_distributive,
)
from .permutability import (
    CloneResult,
    SearchOutcome,
    TermWitness,
    find_hm_terms,
    find_maltsev_term,
    generate_clone3,
    goursat_join_check,
    permutability_level,
)
from .relations import (
    BinRel,
    ConLattice,
    Partition,
    compose,
    con_lattice,
    congruence_generated,
    direct_image,
    equivalence_closure,
    inverse_image,
    is_congruence,
    join,
)
from .terms import (
    Identity,
    Signature,
    eval_term,
    parse_identity,
    parse_term,
    render,
    satisfies_identity,
)

__version__ = "0.1.0"
