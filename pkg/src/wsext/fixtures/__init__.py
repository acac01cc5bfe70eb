"""Bundled fixture files: the worked extensions and witness terms used by
the test suite and handy for CLI experiments.

Extensions (with embedded witnesses and variety axioms):
  example_monoid.json   5-element middle monoid over X = B = {0,1} with
                        saturating addition; witnessed by the ternary sum
                        term, larger than |X x B|
  n2_product.json       direct product of two copies of the 2-element
                        saturating monoid (unique-witness case)
  klein_four.json       Z2 x Z2 as a group extension of Z2 by Z2
  s3.json               the symmetric group on 3 letters over Z3 by Z2
  heyting_chain.json    the 3-chain Heyting semilattice over the 2-chain

Algebras:
  n2.json               saturating 2-element monoid
  left_unital_magma.json  2-element magma with left unit only

Witness terms:
  theta_monoid_sum.json  (+ x y)
  theta_monoid_xzy.json  (+ x1 (+ y x2))      i.e. x1 + y + x2
  theta_group.json       (* x y)
  theta_heyting.json     (meet (imp x z) y)
"""

from importlib.resources import files
from pathlib import Path

EXTENSIONS = {
    "example_monoid": "theta_monoid_xzy",
    "n2_product": "theta_monoid_sum",
    "klein_four": "theta_group",
    "s3": "theta_group",
    "heyting_chain": "theta_heyting",
}


def fixture_path(name: str) -> Path:
    """Absolute path of a bundled fixture file (name with or without .json)."""
    if not name.endswith(".json"):
        name += ".json"
    return Path(str(files(__package__).joinpath(name)))
