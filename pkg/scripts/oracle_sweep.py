"""Compare the Fock simulation of every valid configuration against its compiled signed permutation."""

import argparse
import time

import numpy as np

from gmzi_fabric.fock import FockBasis, GmziSpec, gmzi_unitary
from gmzi_fabric.phases import compile_phi, enumerate_valid


def deviation(n: int, n_tot: int) -> float:
    spec = GmziSpec.square(n)
    basis = FockBasis.create(n, n_tot)
    worst = 0.0
    for phi in enumerate_valid(n):
        sp = compile_phi(phi)
        expected = np.zeros((basis.dim, basis.dim))
        for j, occ in enumerate(basis.states.tolist()):
            sign, image = sp.apply_to_occupation(occ)
            expected[basis.index_of(image), j] = sign
        worst = max(worst, float(np.max(np.abs(gmzi_unitary(spec, phi, n_tot) - expected))))
    return worst


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, nargs="+", default=[2, 4, 8])
    parser.add_argument("--max-photons", type=int, default=3)
    args = parser.parse_args()
    print(f"{'N':>3} {'n_tot':>5} {'dim':>6} {'configs':>7} {'max dev':>9} {'time':>7}")
    for n in args.n:
        for n_tot in range(args.max_photons + 1):
            start = time.perf_counter()
            dev = deviation(n, n_tot)
            dim = FockBasis.create(n, n_tot).dim
            print(f"{n:>3} {n_tot:>5} {dim:>6} {2 * n:>7} {dev:>9.1e} {time.perf_counter() - start:>6.2f}s")


if __name__ == "__main__":
    main()
