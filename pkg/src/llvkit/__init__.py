"""Exact verification toolkit for the Lie-theoretic structure of model
cohomology rings: Hard Lefschetz sl2-triples, bracket closures and their
so-identification, degree-2 quadratic forms with the top-power relation,
Clifford/trace-polarization data, and perverse vs. monodromy weight
filtration comparisons."""

__version__ = "0.1.0"
