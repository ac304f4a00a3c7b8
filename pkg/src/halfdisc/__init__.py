"""halfdisc: exact local intersection numbers of torsion divisors on
semistable elliptic curves y^2 = P(x), their n -> infinity growth against the
combinatorial Neron-fiber model, and the archimedean side (periods, torsion
log-sums, invariant-measure Mahler integrals) of the global assembly."""

__version__ = "0.1.0"
