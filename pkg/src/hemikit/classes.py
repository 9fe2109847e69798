"""Class membership by exhaustive scan of an axiom set."""

from __future__ import annotations

from .algebra import CheckReport, FiniteAlgebra, find_center, report
from .axioms import ClassId, axiom_set
from .errors import MissingCenter, MissingNegation
from .terms import check_sentence


def check_class(alg: FiniteAlgebra, cls, first_only: bool = False) -> CheckReport:
    """Check every axiom of ``cls``; one witness per failing axiom.

    With ``first_only`` the scan stops at the first failing axiom, which is
    all a yes/no question needs.
    """
    ax = axiom_set(ClassId.parse(cls))
    if ax.requires_neg and alg.neg is None:
        raise MissingNegation(f"class {ax.name.value} needs ~")
    if ax.requires_center and alg.center is None:
        c = find_center(alg)
        if c is None:
            raise MissingCenter("algebra has no element fixed by ~")
        alg = alg.replace(center=c)
    failures = []
    for s in ax.all_sentences():
        rep = check_sentence(s, alg)
        if not rep.passed:
            failures.extend(rep.failures)
            if first_only:
                break
    return report(failures, **{"class": ax.name.value})


def is_member(alg: FiniteAlgebra, cls) -> bool:
    try:
        return check_class(alg, cls, first_only=True).passed
    except (MissingNegation, MissingCenter):
        return False
