"""Named weights and matrices used as regression inputs."""
from __future__ import annotations

import re
from fractions import Fraction

from .matroid import QSP_NONBASES
from .quadext import A, QuadExtScalar, T, TPoly
from .subdivision import Weight


def parse_weight(text: str, n: int = 8, r: int = 3) -> Weight:
    """Parse a sum such as ``"e126 + 2e234 + 3/2 e345"`` into a Weight."""
    terms = {}
    for tok in text.replace("-", "+-").split("+"):
        tok = tok.replace(" ", "")
        if not tok:
            continue
        m = re.fullmatch(r"(-?[0-9/]*)\*?e(\d+)", tok)
        if not m:
            raise ValueError(f"cannot parse term {tok!r}")
        coef, basis = m.groups()
        if coef in ("", "-"):
            coef += "1"
        terms[basis] = terms.get(basis, 0) + Fraction(coef)
    return Weight.from_terms(terms, n=n, r=r)


W_SP = Weight.from_terms({b: 1 for b in QSP_NONBASES})

TREE = parse_weight(
    "e126+e234+e237+2e238+e247+e248+e278+e347+e348+e378+2e478+e568"
)

MANTIS = parse_weight(
    "e124+e125+2e126+3e137+2e138+2e145+e146+e156+2e178+e234+e245+e246+2e247+2e248"
    "+e256+3e278+e356+2e378+e456+3e478+2e567+2e568+2e578+2e678"
)

STAR_FINS = parse_weight(
    "2e123+2e124+2e134+2e135+2e136+4e137+3e138+e156+e178+2e234+e245+e246+e247+e248"
    "+e256+e278+e356+e378+e456+e478+2e567+2e568+2e578+2e678"
)

WORKED = {"w_sp": W_SP, "tree": TREE, "mantis": MANTIS, "star_fins": STAR_FINS}


def matrix_At():
    """The t-deformation of the special realization; its valuations give W_SP."""
    one = QuadExtScalar(1)
    c = lambda x: TPoly.const(QuadExtScalar(x))  # noqa: E731
    t = TPoly([QuadExtScalar(0), one])
    a = TPoly.const(A)
    return [
        [c(1), c(0), c(0), c(1), t, c(1) + 4 * t, c(1) - t, c(1) - t * t],
        [c(0), c(1), c(0), c(1) + t, c(1) + t, a + t, c(1) - 2 * t, a - t],
        [c(0), c(0), c(1), c(1) + 2 * t, c(1) + 3 * t, 2 * t, c(1) - a + t, c(1) + t * t],
    ]


__all__ = ["parse_weight", "W_SP", "TREE", "MANTIS", "STAR_FINS", "WORKED", "matrix_At", "T"]
